#include <cmath>
#include <stdexcept>
#include <string>

#include <doctest.h>

#include "oracles.hpp"
#include "qctx/measurement.hpp"

using namespace qctx;

namespace {

Mat3 euler_rotation(double a, double b, double c) {
    auto rot = [](int axis, double t) {
        Mat3 r = mat3_identity();
        int i = (axis + 1) % 3, j = (axis + 2) % 3;
        r(i, i) = std::cos(t);
        r(j, j) = std::cos(t);
        r(i, j) = -std::sin(t);
        r(j, i) = std::sin(t);
        return r;
    };
    return mat3_mul(rot(2, a), mat3_mul(rot(1, b), rot(0, c)));
}

}  // namespace

TEST_CASE("fixed tables have the documented overall spectra") {
    const double s5 = std::sqrt(5.0);
    const double phi = (5.0 - s5) / 2.0;

    auto spectrum_close = [](const MeasurementSet& ms, double a, double b, double c, double tol) {
        OverallMatrix om = overall_matrix(ms);
        CHECK(std::abs(om.spectrum[0] - a) <= tol);
        CHECK(std::abs(om.spectrum[1] - b) <= tol);
        CHECK(std::abs(om.spectrum[2] - c) <= tol);
        // independent eigenvalue route: characteristic cubic. Two of the
        // tables carry a repeated eigenvalue, where the closed-form roots
        // lose half the digits, hence the sqrt(eps)-scale tolerance.
        auto w = oracle::cardano_eigenvalues(om.m);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(om.spectrum[static_cast<size_t>(k)] - w[static_cast<size_t>(k)]) <=
                  5e-8);
        double tr = om.m(0, 0) + om.m(1, 1) + om.m(2, 2);
        CHECK(tr == doctest::Approx(static_cast<double>(ms.graph.n)).epsilon(1e-14));
    };

    spectrum_close(table_1a(), 2.0, 2.0, 1.0, 1e-12);
    spectrum_close(table_1b(), s5, phi, phi, 1e-12);
    spectrum_close(table_2(), 10.0 / 3.0, 3.0, 8.0 / 3.0, 1e-12);

    CHECK(table_1a().graph.edges == make_kcbs_graph().edges);
    CHECK(table_1b().graph.edges == make_kcbs_graph().edges);
    CHECK(table_2().graph.edges == make_kk_graph().edges);
}

TEST_CASE("contextuality values at reference points") {
    QutritSpectrum pure(1, 0, 0);
    CHECK(contextuality_value(pure, table_1b()) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    // the raw 9-vector table is NOT aligned: its value at the pure state
    // contracts M_11 = 19/6, not the top eigenvalue
    CHECK(contextuality_value(pure, table_2()) == doctest::Approx(19.0 / 6).epsilon(1e-14));
    CHECK(contextuality_value(pure, align_to_state(table_2())) ==
          doctest::Approx(10.0 / 3).epsilon(1e-13));

    // at the maximally mixed state every n-vector set gives n/3
    QutritSpectrum flat(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(contextuality_value(flat, table_1a()) == doctest::Approx(5.0 / 3).epsilon(1e-14));
    CHECK(contextuality_value(flat, table_1b()) == doctest::Approx(5.0 / 3).epsilon(1e-14));
    CHECK(contextuality_value(flat, table_2()) == doctest::Approx(3.0).epsilon(1e-14));

    CHECK(contextuality_value(QutritSpectrum(0.5, 0.5, 0), table_1a()) ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("alignment diagonalizes M and matches the lambda.m contraction") {
    for (const MeasurementSet& ms : {table_1b(), table_2()}) {
        MeasurementSet al = align_to_state(ms);
        OverallMatrix om = overall_matrix(al);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) CHECK(std::abs(om.m(i, j)) <= 1e-12);
        CHECK(om.m(0, 0) >= om.m(1, 1) - 1e-12);
        CHECK(om.m(1, 1) >= om.m(2, 2) - 1e-12);

        OverallMatrix before = overall_matrix(ms);
        QutritSpectrum rho(0.6, 0.3, 0.1);
        double via_spectrum = rho.l1 * before.spectrum[0] + rho.l2 * before.spectrum[1] +
                              rho.l3 * before.spectrum[2];
        CHECK(contextuality_value(rho, al) == doctest::Approx(via_spectrum).epsilon(1e-13));
        // exclusivity survives the rotation
        CHECK(al.graph.edges == ms.graph.edges);
    }
}

TEST_CASE("aligned value is invariant under global rotations of the set") {
    Mat3 q = euler_rotation(0.3, 0.7, 1.1);
    MeasurementSet base = table_1b();
    std::vector<Vec3> rotated;
    for (const Vec3& v : base.vectors) rotated.push_back(mat3_mul(q, v));
    MeasurementSet turned = make_measurement_set(base.graph, rotated);

    QutritSpectrum rho(0.7, 0.2, 0.1);
    double a = contextuality_value(rho, align_to_state(base));
    double b = contextuality_value(rho, align_to_state(turned));
    CHECK(a == doctest::Approx(b).epsilon(1e-13));

    OverallMatrix om = overall_matrix(turned);
    CHECK(om.spectrum[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));
}

TEST_CASE("diagonal weights accept unordered input but stay a distribution") {
    DiagonalWeights w(0.2, 0.5, 0.3);
    MeasurementSet ms = table_1b();
    double manual = 0.0;
    for (const Vec3& v : ms.vectors)
        manual += 0.2 * v[0] * v[0] + 0.5 * v[1] * v[1] + 0.3 * v[2] * v[2];
    CHECK(contextuality_value(w, ms) == doctest::Approx(manual).epsilon(1e-15));

    // ordered weights agree with the spectrum overload
    CHECK(contextuality_value(DiagonalWeights(0.5, 0.3, 0.2), ms) ==
          doctest::Approx(contextuality_value(QutritSpectrum(0.5, 0.3, 0.2), ms)).epsilon(1e-15));

    CHECK_THROWS_AS(DiagonalWeights(0.5, 0.6, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(DiagonalWeights(0.5, 0.3, 0.3), std::invalid_argument);
}

TEST_CASE("measurement-set construction rejects broken input") {
    CHECK_THROWS_AS(make_measurement_set(make_kcbs_graph(), {{1, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(
        make_measurement_set(make_graph(2, {}), {Vec3{1, 0, 0}, Vec3{0, 2, 0}}),
        std::invalid_argument);
    // an edge between parallel vectors violates exclusivity
    CHECK_THROWS_AS(
        make_measurement_set(make_graph(2, {{1, 2}}), {Vec3{1, 0, 0}, Vec3{1, 0, 0}}),
        std::invalid_argument);
}

TEST_CASE("measurement-set files round-trip the 9-vector table") {
    MeasurementSet ms = load_measurement_set_file(std::string(QCTX_DATA_DIR) + "/table2.mset");
    MeasurementSet ref = table_2();
    CHECK(ms.graph.edges == ref.graph.edges);
    REQUIRE(ms.vectors.size() == 9);
    for (size_t i = 0; i < 9; ++i)
        for (int c = 0; c < 3; ++c)
            CHECK(std::abs(ms.vectors[i][static_cast<size_t>(c)] -
                           ref.vectors[i][static_cast<size_t>(c)]) <= 1e-15);

    QutritSpectrum pure(1, 0, 0);
    CHECK(contextuality_value(pure, align_to_state(ms)) ==
          doctest::Approx(10.0 / 3).epsilon(1e-12));
}

TEST_CASE("measurement-set text without a graph line gets the edgeless graph") {
    MeasurementSet ms = load_measurement_set("2\n1 0 0\n0 1 0\n", default_graph_resolver());
    CHECK(ms.graph.n == 2);
    CHECK(ms.graph.edges.empty());
}

TEST_CASE("measurement-set parsing reports offending line numbers") {
    auto line_of = [](const std::string& text) {
        try {
            load_measurement_set(text, default_graph_resolver());
        } catch (const parse_error& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("two\n1 0 0\n") == 1);
    CHECK(line_of("1\n1 0\n") == 2);
    CHECK(line_of("1\n1 0 0 9\n") == 2);
    CHECK(line_of("2\n1 0 0\n") == 2);  // vector shortfall reported at EOF
    CHECK(line_of("1\n1 0 0\nkcbs\nextra\n") == 4);

    // graph line may be a path to an edge-list file
    std::string text = "5\n1 0 0\n1 0 0\n0 1 0\n0 1 0\n0 0 1\n" + std::string(QCTX_DATA_DIR) +
                       "/kcbs.edges\n";
    MeasurementSet ms = load_measurement_set(text, default_graph_resolver());
    CHECK(ms.graph.edges == make_kcbs_graph().edges);
}
