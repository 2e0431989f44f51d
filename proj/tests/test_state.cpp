#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "qctx/state.hpp"

using namespace qctx;

TEST_CASE("spectrum construction enforces order, positivity, trace") {
    QutritSpectrum ok(0.5, 0.3, 0.2);
    CHECK(ok[0] == 0.5);
    CHECK(ok[1] == 0.3);
    CHECK(ok[2] == 0.2);
    CHECK_THROWS_AS(QutritSpectrum(0.3, 0.5, 0.2), std::invalid_argument);  // out of order
    CHECK_THROWS_AS(QutritSpectrum(0.8, 0.3, -0.1), std::invalid_argument); // negative
    CHECK_THROWS_AS(QutritSpectrum(0.5, 0.3, 0.1), std::invalid_argument);  // trace != 1
}

TEST_CASE("linear entropy endpoints and midpoint") {
    CHECK(linear_entropy(QutritSpectrum(1, 0, 0)) == doctest::Approx(0.0).epsilon(1e-15));
    double third = 1.0 / 3.0;
    CHECK(linear_entropy(QutritSpectrum(third, third, third)) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(linear_entropy(QutritSpectrum(0.5, 0.5, 0.0)) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("arc names round-trip") {
    for (ArcId a : {ArcId::AC, ArcId::CD, ArcId::AD, ArcId::EF, ArcId::FG, ArcId::EG})
        CHECK(arc_from_name(arc_name(a)) == a);
    CHECK(arc_from_name("ac") == ArcId::AC);
    CHECK(arc_from_name("Fg") == ArcId::FG);
    CHECK_THROWS_AS(arc_from_name("xy"), std::invalid_argument);
}

TEST_CASE("arc domains and boundary states") {
    CHECK(arc_domain(ArcId::AC) == std::pair<double, double>{0.0, 0.75});
    CHECK(arc_domain(ArcId::CD) == std::pair<double, double>{0.75, 1.0});
    CHECK(arc_domain(ArcId::AD) == std::pair<double, double>{0.0, 1.0});
    CHECK(arc_domain(ArcId::EF) == std::pair<double, double>{0.0, 2.0 / 3.0});
    CHECK(arc_domain(ArcId::FG) == std::pair<double, double>{2.0 / 3.0, 1.0});
    CHECK(arc_domain(ArcId::EG) == std::pair<double, double>{0.0, 1.0});

    // named points: A=E=(1,0,0), C=(1/2,1/2,0), D=G=(1/3,1/3,1/3), F=(2/3,1/3,0)
    QutritSpectrum a = arc_state(ArcId::AC, 0.0);
    CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-14));
    QutritSpectrum c = arc_state(ArcId::AC, 0.75);
    CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-12));
    QutritSpectrum d = arc_state(ArcId::CD, 1.0);
    CHECK(d[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    QutritSpectrum e = arc_state(ArcId::EF, 0.0);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-14));
    QutritSpectrum f1 = arc_state(ArcId::EF, 2.0 / 3.0);
    QutritSpectrum f2 = arc_state(ArcId::FG, 2.0 / 3.0);
    CHECK(f1[0] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(f1[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(f1[0] == doctest::Approx(f2[0]).epsilon(1e-12));  // families meet at F
    CHECK(f1[2] == doctest::Approx(f2[2]).epsilon(1e-12));
    QutritSpectrum g = arc_state(ArcId::FG, 1.0);
    CHECK(g[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));

    CHECK_THROWS_AS(arc_state(ArcId::AC, 0.8), std::domain_error);
    CHECK_THROWS_AS(arc_state(ArcId::CD, 0.5), std::domain_error);
    CHECK_THROWS_AS(arc_state(ArcId::EF, 0.7), std::domain_error);
    CHECK_THROWS_AS(arc_state(ArcId::FG, 0.5), std::domain_error);
    CHECK_THROWS_AS(arc_state(ArcId::AD, -0.1), std::domain_error);
}

TEST_CASE("arc states carry the entropy they were asked for") {
    for (ArcId arc : {ArcId::AC, ArcId::CD, ArcId::AD, ArcId::EF, ArcId::FG, ArcId::EG}) {
        auto [lo, hi] = arc_domain(arc);
        for (int i = 0; i <= 16; ++i) {
            double s = lo + (hi - lo) * i / 16.0;
            CHECK(linear_entropy(arc_state(arc, s)) == doctest::Approx(s).epsilon(1e-11));
        }
    }
}

TEST_CASE("closed-form arc values at the corners") {
    double s5 = std::sqrt(5.0);
    CHECK(arc_cq(ArcId::AD, 0.0) == doctest::Approx(s5).epsilon(1e-14));
    CHECK(arc_cq(ArcId::AD, 1.0) == doctest::Approx(5.0 / 3).epsilon(1e-14));
    CHECK(arc_cq(ArcId::CD, 0.75) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(arc_cq(ArcId::CD, 1.0) == doctest::Approx(5.0 / 3).epsilon(1e-14));
    CHECK(arc_cq(ArcId::EF, 0.0) == doctest::Approx(10.0 / 3).epsilon(1e-14));
    CHECK(arc_cq(ArcId::EF, 2.0 / 3) == doctest::Approx(29.0 / 9).epsilon(1e-14));
    CHECK(arc_cq(ArcId::FG, 2.0 / 3) == doctest::Approx(29.0 / 9).epsilon(1e-14));
    CHECK(arc_cq(ArcId::FG, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(arc_cq(ArcId::EG, 0.0) == doctest::Approx(10.0 / 3).epsilon(1e-14));
    CHECK(arc_cq(ArcId::EG, 1.0) == doctest::Approx(3.0).epsilon(1e-14));

    // the CD formula extends below the state family's own interval
    CHECK(arc_cq(ArcId::CD, 0.2) ==
          doctest::Approx((2.0 * std::sqrt(0.8) + 5.0) / 3.0).epsilon(1e-14));

    CHECK_THROWS_AS(arc_cq(ArcId::AC, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(arc_cq(ArcId::EF, 0.7), std::domain_error);
    CHECK_THROWS_AS(arc_cq(ArcId::FG, 0.5), std::domain_error);
}

TEST_CASE("closed-form arc values decrease with entropy") {
    for (ArcId arc : {ArcId::CD, ArcId::AD, ArcId::EF, ArcId::FG, ArcId::EG}) {
        double lo = arc == ArcId::CD ? 0.0 : arc_domain(arc).first;  // CD formula is wider
        double hi = arc == ArcId::CD ? 1.0 : arc_domain(arc).second;
        double prev = arc_cq(arc, lo);
        for (int i = 1; i <= 24; ++i) {
            double cur = arc_cq(arc, lo + (hi - lo) * i / 24.0);
            CHECK(cur <= prev + 1e-13);
            prev = cur;
        }
    }
}

TEST_CASE("iso-entropy family spans ordered spectra at fixed entropy") {
    for (double s : {0.1, 0.3, 0.5, 2.0 / 3.0, 0.75, 0.9}) {
        for (int i = 0; i <= 10; ++i) {
            double t = i / 10.0;
            QutritSpectrum rho = iso_entropy_family(s, t);
            CHECK(linear_entropy(rho) == doctest::Approx(s).epsilon(1e-11));
            CHECK(rho[0] >= rho[1]);
            CHECK(rho[1] >= rho[2]);
            CHECK(rho[2] >= 0.0);
        }
        QutritSpectrum bottom = iso_entropy_family(s, 0.0);
        CHECK(bottom[1] == doctest::Approx(bottom[2]).epsilon(1e-12));
        QutritSpectrum top = iso_entropy_family(s, 1.0);
        if (s <= 0.75)
            CHECK(top[2] == doctest::Approx(0.0).epsilon(1e-11));
        else
            CHECK(top[0] == doctest::Approx(top[1]).epsilon(1e-11));
    }

    // s = 2/3, t = 1 lands exactly on the rank-2 point F
    QutritSpectrum f = iso_entropy_family(2.0 / 3.0, 1.0);
    CHECK(f[0] == doctest::Approx(2.0 / 3).epsilon(1e-11));
    CHECK(f[1] == doctest::Approx(1.0 / 3).epsilon(1e-11));

    // degenerate corners: the family collapses to a single point
    QutritSpectrum pure = iso_entropy_family(0.0, 0.7);
    CHECK(pure[0] == doctest::Approx(1.0).epsilon(1e-12));
    QutritSpectrum flat = iso_entropy_family(1.0, 0.7);
    CHECK(flat[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(flat[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));
}
