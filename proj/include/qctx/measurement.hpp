#pragma once
// Measurement sets = orthonormal representations of an exclusivity graph:
// one real unit 3-vector per vertex, orthogonal across every edge. Includes
// the three fixed sets from the reference tables, the overall matrix
// M = sum of projectors, and the eigenbasis alignment that makes M diagonal.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qctx/graph.hpp"
#include "qctx/linalg.hpp"
#include "qctx/state.hpp"

namespace qctx {

struct MeasurementSet {
    ExclusivityGraph graph;
    std::vector<Vec3> vectors;  // one per vertex, unit norm
};

// Validates: count matches, unit norms to 1e-10, |v_i . v_j| <= 1e-8 on edges.
MeasurementSet make_measurement_set(ExclusivityGraph graph, std::vector<Vec3> vectors);

// Basis-vector set optimal along the lambda1=lambda2 (CD) family; M = diag(2,2,1).
MeasurementSet table_1a();
// Umbrella vectors tau*(sqrt(cos b), cos 2kb, sin 2kb), b = pi/5; M has
// spectrum (sqrt 5, (5-sqrt5)/2, (5-sqrt5)/2).
MeasurementSet table_1b();
// The 9-vector set; M spectrum (10/3, 3, 8/3). Optimal for every state that
// violates the 13-edge inequality.
MeasurementSet table_2();

// C_q = sum_i <v_i| diag(lambda) |v_i> = Tr[M rho].
double contextuality_value(const QutritSpectrum& rho, const MeasurementSet& ms);

// Unordered diagonal weights for the violation surface (the one API point
// where the descending-order restriction is deliberately absent).
struct DiagonalWeights {
    double l1, l2, l3;
    DiagonalWeights(double a, double b, double c);
};
double contextuality_value(const DiagonalWeights& w, const MeasurementSet& ms);

struct OverallMatrix {
    Mat3 m;
    std::array<double, 3> spectrum;  // descending (m1, m2, m3)
    Mat3 eigenbasis;                 // columns match spectrum order
};

OverallMatrix overall_matrix(const MeasurementSet& ms);

// Rotate every vector by the eigenbasis transpose so M becomes diagonal with
// descending diagonal. Inner products are preserved, so exclusivity survives,
// and for any descending spectrum the value can only go up.
MeasurementSet align_to_state(const MeasurementSet& ms);

// Resolves the optional trailing graph name of the measurement-set format
// ("kcbs" | "kk" | path). The default resolver maps names to the built-in
// graphs and anything else to load_graph_file.
using GraphResolver = std::function<ExclusivityGraph(const std::string&)>;
GraphResolver default_graph_resolver();

// Measurement-set file: first line n, then n lines of three components,
// optional trailing graph line. Without the trailing line the set is attached
// to the edgeless graph on n vertices (no exclusivity assumed).
MeasurementSet load_measurement_set(std::istream& in, const GraphResolver& resolve);
MeasurementSet load_measurement_set(const std::string& text, const GraphResolver& resolve);
MeasurementSet load_measurement_set_file(const std::string& path);

}  // namespace qctx
