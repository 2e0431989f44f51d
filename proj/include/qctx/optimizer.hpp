#pragma once
// Maximize C_q = sum_i <v_i|diag(lambda)|v_i> over unit vectors with
// orthogonality on graph edges: multistart penalized projected gradient
// ascent, block-coordinate polish, a Levenberg-damped Newton solve of the
// KKT system, and a final constraint restore. Deterministic for a fixed
// config: each start draws from its own (seed, start_index) RNG stream and
// ties are broken by lowest start index.

#include <stdexcept>
#include <vector>

#include "qctx/graph.hpp"
#include "qctx/measurement.hpp"
#include "qctx/state.hpp"

namespace qctx {

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OptimizerConfig {
    int starts = 64;
    std::uint64_t seed = 0;
    std::vector<double> penalty_schedule = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
    int max_iters = 2000;        // per penalty stage
    double objective_tol = 1e-12;
    double feasibility_tol = 1e-7;

    void validate() const;       // throws std::invalid_argument
};

struct OptimizationResult {
    MeasurementSet best_set;
    double value = 0.0;
    double max_edge_residual = 0.0;
    int start_index = -1;
};

OptimizationResult optimize_measurements(const QutritSpectrum& rho, const ExclusivityGraph& g,
                                         const OptimizerConfig& cfg);

// Lovasz-number route: the pure-state optimum over measurement sets.
double pure_state_optimum(const ExclusivityGraph& g, const OptimizerConfig& cfg);

struct McmsPoint {
    QutritSpectrum state;
    double value;
};

// Extremize the optimized C_q over the iso-entropy family at fixed s:
// dense t-grid plus golden-section refinement. upper=max, lower=min.
McmsPoint mcms_upper(const ExclusivityGraph& g, double s, const OptimizerConfig& cfg);
McmsPoint mcms_lower(const ExclusivityGraph& g, double s, const OptimizerConfig& cfg);

struct CurvePoint {
    double s;
    double cq;
};

// Optimize along a named arc at `samples` uniform entropy values.
std::vector<CurvePoint> trace_arc_numeric(ArcId arc, const ExclusivityGraph& g, int samples,
                                          const OptimizerConfig& cfg);

// Penalized objective f = C_q - mu * sum_edges (v_i . v_j)^2 over raw (not
// necessarily unit) coordinates, and its analytic gradient. Exposed so tests
// can pit the gradient against central finite differences.
double penalized_objective(const std::vector<Vec3>& v, const QutritSpectrum& rho,
                           const ExclusivityGraph& g, double mu);
std::vector<Vec3> penalized_gradient(const std::vector<Vec3>& v, const QutritSpectrum& rho,
                                     const ExclusivityGraph& g, double mu);

// Gauss-Newton projection back onto {unit norms, edge orthogonality};
// used by the optimizer and the spectral trace. Exposed for reuse/tests.
std::vector<Vec3> restore_feasible(std::vector<Vec3> v, const ExclusivityGraph& g, int iters = 20);

// Some feasible orthonormal representation from a random draw (block
// orthogonalization + restore). Throws infeasible_error when none of the
// attempts satisfies the constraints.
std::vector<Vec3> feasible_point(const ExclusivityGraph& g, RngStream& rng);

double max_edge_residual(const std::vector<Vec3>& v, const ExclusivityGraph& g);
double max_unit_deviation(const std::vector<Vec3>& v);

}  // namespace qctx
