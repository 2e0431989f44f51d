#pragma once
// Spectral analysis of the overall matrix M: the trace inequality with its
// doubly stochastic witness, curves of optimal-set spectra, slope checks, the
// feasible-spectrum trace, and the diagonal-state violation surface.

#include <cstdint>
#include <vector>

#include "qctx/graph.hpp"
#include "qctx/linalg.hpp"
#include "qctx/measurement.hpp"
#include "qctx/optimizer.hpp"
#include "qctx/state.hpp"

namespace qctx {

struct SpectralPoint {
    double m1, m2, m3;  // descending, sums to the vertex count
};

// W = (|u_ij|^2): nonnegative with unit row and column sums.
struct StochasticWitness {
    MatrixN w;
};
// Validates double stochasticity to `tol`; throws std::invalid_argument.
StochasticWitness make_stochastic_witness(MatrixN w, double tol = 1e-12);

struct TraceCheck {
    double lhs;  // Tr[diag(a) u diag(b) u^T], computed by explicit products
    double rhs;  // descending dot product a . b
    StochasticWitness witness;
};

// The trace inequality Tr[AB] <= a.b for descending diagonals a, b and an
// orthogonal u. Rejects non-descending inputs and u with |u^T u - I| > 1e-10.
TraceCheck trace_inequality_check(const std::vector<double>& a, const std::vector<double>& b,
                                  const MatrixN& u);

// Haar-ish random orthogonal matrix from Gram-Schmidt on Gaussian columns.
MatrixN random_orthogonal(int n, RngStream& rng);

struct LemmaSuiteResult {
    long trials = 0;
    double max_violation = -1e300;   // max of lhs - rhs (should stay <= 0 + noise)
    double max_witness_dev = 0.0;    // worst row/column sum deviation from 1
    double max_identity_dev = 0.0;   // worst |lhs - a.W.b|
};

// Randomized suite over per-trial RNG streams: dims are cycled trial by trial.
LemmaSuiteResult trace_inequality_suite(long trials, std::uint64_t seed,
                                        const std::vector<int>& dims);

struct PermutationCheck {
    bool identity_is_max;   // no permutation beats the identity
    double identity_value;  // equals a . b
    double best_value;      // max over all permutations
};

// Exhaustive check that among permutation matrices the identity maximizes
// Tr[AB]; factorial enumeration, guarded to n <= 8.
PermutationCheck permutation_maximum_check(const std::vector<double>& a,
                                           const std::vector<double>& b);

struct SpectralCurve {
    std::vector<SpectralPoint> points;  // family order, duplicates collapsed
    std::vector<int> source_index;      // index into the input family per point
};

// For each state: optimize, align, record the descending spectrum of M.
// Nearly flat spectra (objective would be constant) are evaluated at a tiny
// split along the lambda2=lambda3 direction, i.e. the s -> 1 limit within the
// family, so the recorded point is the limit of optimal spectra. Points equal
// within 1e-6 in all coordinates are collapsed onto the first occurrence.
SpectralCurve spectral_curve(const ExclusivityGraph& g,
                             const std::vector<QutritSpectrum>& family,
                             const OptimizerConfig& cfg);

// March the constraint manifold between spectrum extremes: the pure-state
// optimal set on top and, when one exists, the tight frame M = (n/3) I at the
// bottom (found by alternating projections + a Gauss-Newton finish). Without
// a tight frame the march descends from the top until targets stop being
// attainable. Returns points sorted by ascending m1.
std::vector<SpectralPoint> feasible_spectrum_trace(const ExclusivityGraph& g, int samples,
                                                   const OptimizerConfig& cfg);

struct SlopeReport {
    std::vector<double> dm2;     // consecutive-pair dm2/dm1
    std::vector<double> dm3;     // consecutive-pair dm3/dm1
    double min_dm2 = 0.0, max_dm2 = 0.0;
    double min_dm3 = 0.0, max_dm3 = 0.0;
    double max_identity_dev = 0.0;    // |dm3 + (1 + dm2)| worst pair
    bool dm2_all_below_minus_one = false;
    bool dm2_all_within_1e4 = false;  // |dm2/dm1| <= 1e-4 everywhere
    bool dm3_all_positive = false;
    bool dm3_all_nonpositive = false;
};

// Consecutive-pair finite differences; input must be sorted by m1 and hold at
// least 3 points (throws std::invalid_argument otherwise).
SlopeReport curve_slope_analysis(const std::vector<SpectralPoint>& points);

// Stationarity/sign condition of dC_q/dm1 along the KCBS arcs: AC returns the
// stationary slope -(1+sqrt(1-4s/3))/(1-sqrt(1-4s/3)) (-inf at s = 0), CD the
// sign -1 (m1-minimal set optimal), AD the sign +1 (m1-maximal set optimal).
// Other arcs throw std::invalid_argument.
double optimal_slope_condition(ArcId arc, double s);

struct SurfaceSample {
    double l1, l2, cq;
};

// contextuality_value over the barycentric grid {(i,j): i+j <= grid-1} of
// unordered diagonal states, with the fixed set ms. grid >= 2.
std::vector<SurfaceSample> diagonal_violation_surface(const MeasurementSet& ms, int grid);

}  // namespace qctx
