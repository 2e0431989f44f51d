#include "qctx/measurement.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qctx {

namespace {
constexpr double kUnitTol = 1e-10;
constexpr double kOrthTol = 1e-8;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

MeasurementSet make_measurement_set(ExclusivityGraph graph, std::vector<Vec3> vectors) {
    if (static_cast<int>(vectors.size()) != graph.n)
        throw std::invalid_argument("make_measurement_set: vector count " +
                                    std::to_string(vectors.size()) + " != vertex count " +
                                    std::to_string(graph.n));
    for (size_t i = 0; i < vectors.size(); ++i) {
        double d = std::abs(norm(vectors[i]) - 1.0);
        if (d > kUnitTol)
            throw std::invalid_argument("make_measurement_set: vector " + std::to_string(i + 1) +
                                        " off unit norm by " + std::to_string(d));
    }
    for (auto [i, j] : graph.edges) {
        double ip = std::abs(dot(vectors[static_cast<size_t>(i - 1)],
                                 vectors[static_cast<size_t>(j - 1)]));
        if (ip > kOrthTol)
            throw std::invalid_argument("make_measurement_set: edge (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") inner product " +
                                        std::to_string(ip) + " exceeds exclusivity tolerance");
    }
    MeasurementSet ms;
    ms.graph = std::move(graph);
    ms.vectors = std::move(vectors);
    return ms;
}

MeasurementSet table_1a() {
    return make_measurement_set(make_kcbs_graph(), {Vec3{1, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                                                    Vec3{0, 1, 0}, Vec3{0, 0, 1}});
}

MeasurementSet table_1b() {
    double beta = kPi / 5.0;
    double tau = 1.0 / std::sqrt(1.0 + std::cos(beta));
    std::vector<Vec3> vs;
    for (int k = 0; k < 5; ++k) {
        double a = 2.0 * k * beta;
        vs.push_back({tau * std::sqrt(std::cos(beta)), tau * std::cos(a), tau * std::sin(a)});
    }
    return make_measurement_set(make_kcbs_graph(), std::move(vs));
}

MeasurementSet table_2() {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    std::vector<Vec3> vs = {
        {1, 0, 0},
        {0, 1, 0},
        {0, 0, 1},
        {0, 1.0 / r2, -1.0 / r2},
        {1.0 / r3, 0, -r2 / r3},
        {1.0 / r3, r2 / r3, 0},
        {1.0 / r2, 0.5, 0.5},
        {1.0 / r2, -0.5, -0.5},
        {1.0 / r2, -0.5, 0.5},
    };
    return make_measurement_set(make_kk_graph(), std::move(vs));
}

double contextuality_value(const QutritSpectrum& rho, const MeasurementSet& ms) {
    double s = 0.0;
    for (const Vec3& v : ms.vectors)
        s += rho.l1 * v[0] * v[0] + rho.l2 * v[1] * v[1] + rho.l3 * v[2] * v[2];
    return s;
}

DiagonalWeights::DiagonalWeights(double a, double b, double c) : l1(a), l2(b), l3(c) {
    if (a < -1e-12 || b < -1e-12 || c < -1e-12)
        throw std::invalid_argument("DiagonalWeights: negative weight");
    if (std::abs(a + b + c - 1.0) > 1e-12)
        throw std::invalid_argument("DiagonalWeights: weights must sum to 1");
}

double contextuality_value(const DiagonalWeights& w, const MeasurementSet& ms) {
    double s = 0.0;
    for (const Vec3& v : ms.vectors)
        s += w.l1 * v[0] * v[0] + w.l2 * v[1] * v[1] + w.l3 * v[2] * v[2];
    return s;
}

OverallMatrix overall_matrix(const MeasurementSet& ms) {
    OverallMatrix om;
    om.m = mat3_zero();
    for (const Vec3& v : ms.vectors) add_outer(om.m, v, 1.0);
    SymEigen3 eig = sym_eigen3(om.m);
    om.spectrum = eig.w;
    om.eigenbasis = eig.v;
    return om;
}

MeasurementSet align_to_state(const MeasurementSet& ms) {
    OverallMatrix om = overall_matrix(ms);
    Mat3 ut = mat3_transpose(om.eigenbasis);
    std::vector<Vec3> rotated;
    rotated.reserve(ms.vectors.size());
    for (const Vec3& v : ms.vectors) rotated.push_back(mat3_mul(ut, v));
    return make_measurement_set(ms.graph, std::move(rotated));
}

GraphResolver default_graph_resolver() {
    return [](const std::string& name) -> ExclusivityGraph {
        if (name == "kcbs") return make_kcbs_graph();
        if (name == "kk") return make_kk_graph();
        return load_graph_file(name);
    };
}

MeasurementSet load_measurement_set(std::istream& in, const GraphResolver& resolve) {
    std::string line;
    int line_no = 0;
    int n = -1;
    std::vector<Vec3> vectors;
    std::string graph_name;
    bool have_graph = false;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            std::string tok;
            if (!(ls >> tok)) continue;
            try {
                size_t used = 0;
                n = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw parse_error("expected vector count, got '" + tok + "'", line_no);
            }
            if (n < 0) throw parse_error("vector count must be nonnegative", line_no);
            continue;
        }
        if (static_cast<int>(vectors.size()) < n) {
            double x, y, z;
            if (!(ls >> x)) continue;  // blank
            if (!(ls >> y >> z)) throw parse_error("expected three components", line_no);
            std::string extra;
            if (ls >> extra) throw parse_error("trailing token '" + extra + "'", line_no);
            vectors.push_back({x, y, z});
            continue;
        }
        std::string tok;
        if (!(ls >> tok)) continue;
        if (have_graph) throw parse_error("unexpected content after graph line", line_no);
        // graph names/paths may contain spaces only via the rest of the line;
        // take the whole trimmed remainder as the name
        std::string rest;
        std::getline(ls, rest);
        graph_name = tok + rest;
        while (!graph_name.empty() && std::isspace(static_cast<unsigned char>(graph_name.back())))
            graph_name.pop_back();
        have_graph = true;
    }
    if (n < 0) throw parse_error("missing vector count line", std::max(1, line_no));
    if (static_cast<int>(vectors.size()) < n)
        throw parse_error("expected " + std::to_string(n) + " vectors, got " +
                              std::to_string(vectors.size()),
                          line_no);
    ExclusivityGraph g = have_graph ? resolve(graph_name) : make_graph(n, {});
    return make_measurement_set(std::move(g), std::move(vectors));
}

MeasurementSet load_measurement_set(const std::string& text, const GraphResolver& resolve) {
    std::istringstream in(text);
    return load_measurement_set(in, resolve);
}

MeasurementSet load_measurement_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_measurement_set_file: cannot open " + path);
    return load_measurement_set(in, default_graph_resolver());
}

}  // namespace qctx
