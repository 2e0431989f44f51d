#include "qctx/state.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace qctx {

namespace {
constexpr double kOrderTol = 1e-12;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

QutritSpectrum::QutritSpectrum(double a, double b, double c) : l1(a), l2(b), l3(c) {
    if (!(a >= b - kOrderTol && b >= c - kOrderTol))
        throw std::invalid_argument("QutritSpectrum: eigenvalues not in decreasing order");
    if (c < -kOrderTol) throw std::invalid_argument("QutritSpectrum: negative eigenvalue");
    if (std::abs(a + b + c - 1.0) > kOrderTol)
        throw std::invalid_argument("QutritSpectrum: trace differs from 1");
}

double linear_entropy(const QutritSpectrum& rho) {
    return 1.5 * (1.0 - (rho.l1 * rho.l1 + rho.l2 * rho.l2 + rho.l3 * rho.l3));
}

const char* arc_name(ArcId arc) {
    switch (arc) {
        case ArcId::AC: return "AC";
        case ArcId::CD: return "CD";
        case ArcId::AD: return "AD";
        case ArcId::EF: return "EF";
        case ArcId::FG: return "FG";
        case ArcId::EG: return "EG";
    }
    throw std::invalid_argument("arc_name: bad arc");
}

ArcId arc_from_name(const std::string& name) {
    std::string u;
    for (char c : name) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (u == "AC") return ArcId::AC;
    if (u == "CD") return ArcId::CD;
    if (u == "AD") return ArcId::AD;
    if (u == "EF") return ArcId::EF;
    if (u == "FG") return ArcId::FG;
    if (u == "EG") return ArcId::EG;
    throw std::invalid_argument("unknown arc '" + name + "'");
}

std::pair<double, double> arc_domain(ArcId arc) {
    switch (arc) {
        case ArcId::AC: return {0.0, 0.75};
        case ArcId::CD: return {0.75, 1.0};
        case ArcId::AD: return {0.0, 1.0};
        case ArcId::EF: return {0.0, 2.0 / 3.0};
        case ArcId::FG: return {2.0 / 3.0, 1.0};
        case ArcId::EG: return {0.0, 1.0};
    }
    throw std::invalid_argument("arc_domain: bad arc");
}

namespace {

void check_domain(ArcId arc, double s) {
    auto [lo, hi] = arc_domain(arc);
    // tiny slack so boundary values computed in floating point stay usable
    if (s < lo - 1e-12 || s > hi + 1e-12)
        throw std::domain_error(std::string("arc_state: s = ") + std::to_string(s) +
                                " outside " + arc_name(arc) + " interval [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace

QutritSpectrum arc_state(ArcId arc, double s) {
    check_domain(arc, s);
    switch (arc) {
        case ArcId::AC: {
            double x = std::sqrt(std::max(0.0, 1.0 - 4.0 * s / 3.0));
            return {(1.0 + x) / 2.0, (1.0 - x) / 2.0, 0.0};
        }
        case ArcId::CD: {
            double x = std::sqrt(std::max(0.0, 1.0 - s));
            return {(1.0 + x) / 3.0, (1.0 + x) / 3.0, clamp01((1.0 - 2.0 * x) / 3.0)};
        }
        case ArcId::AD:
        case ArcId::EG: {
            double x = std::sqrt(std::max(0.0, 1.0 - s));
            return {(1.0 + 2.0 * x) / 3.0, (1.0 - x) / 3.0, (1.0 - x) / 3.0};
        }
        case ArcId::EF: {
            double q = std::sqrt(std::max(0.0, 9.0 - 12.0 * s));
            return {(3.0 + q) / 6.0, (3.0 - q) / 6.0, 0.0};
        }
        case ArcId::FG: {
            // corrected family: lambda2 pinned at 1/3, radius sqrt(3(1-s))
            double r = std::sqrt(std::max(0.0, 3.0 * (1.0 - s)));
            return {(1.0 + r) / 3.0, 1.0 / 3.0, clamp01((1.0 - r) / 3.0)};
        }
    }
    throw std::invalid_argument("arc_state: bad arc");
}

double arc_cq(ArcId arc, double s) {
    if (arc == ArcId::AC)
        throw std::invalid_argument(
            "arc_cq: AC has no closed form; use the numerical optimizer (trace_arc_numeric)");
    if (s < -1e-12 || s > 1.0 + 1e-12)
        throw std::domain_error("arc_cq: s outside [0,1]");
    double x = std::sqrt(std::max(0.0, 1.0 - s));
    switch (arc) {
        case ArcId::CD: return (2.0 * x + 5.0) / 3.0;
        case ArcId::AD: return ((3.0 * std::sqrt(5.0) - 5.0) * x + 5.0) / 3.0;
        case ArcId::EF: {
            auto [lo, hi] = arc_domain(ArcId::EF);
            if (s < lo - 1e-12 || s > hi + 1e-12)
                throw std::domain_error("arc_cq: s outside EF interval [0, 2/3]");
            return (std::sqrt(std::max(0.0, 9.0 - 12.0 * s)) + 57.0) / 18.0;
        }
        case ArcId::FG: {
            auto [lo, hi] = arc_domain(ArcId::FG);
            if (s < lo - 1e-12 || s > hi + 1e-12)
                throw std::domain_error("arc_cq: s outside FG interval [2/3, 1]");
            return 2.0 * x / (3.0 * std::sqrt(3.0)) + 3.0;
        }
        case ArcId::EG: return (x + 9.0) / 3.0;
        default: break;
    }
    throw std::invalid_argument("arc_cq: bad arc");
}

QutritSpectrum iso_entropy_family(double s, double t) {
    if (s < -1e-12 || s > 1.0 + 1e-12)
        throw std::domain_error("iso_entropy_family: s outside [0,1]");
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw std::domain_error("iso_entropy_family: t outside [0,1]");
    double x = std::sqrt(std::max(0.0, 1.0 - s));
    if (x <= 1e-12) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    // theta = 0 is the lambda2 = lambda3 extreme; the ordered-and-nonnegative
    // window ends where lambda3 hits 0 (x > 1/2) or lambda1 = lambda2 (x <= 1/2)
    double tmax = kPi / 3.0;
    if (x > 0.5) tmax -= std::acos(1.0 / (2.0 * x));
    double th = clamp01(t) * tmax;
    double l1 = 1.0 / 3.0 + (2.0 / 3.0) * x * std::cos(th);
    double l2 = 1.0 / 3.0 - (2.0 / 3.0) * x * std::cos(th + kPi / 3.0);
    double l3 = 1.0 / 3.0 - (2.0 / 3.0) * x * std::cos(th - kPi / 3.0);
    if (l3 < 0.0 && l3 > -1e-12) l3 = 0.0;
    return {l1, l2, l3};
}

}  // namespace qctx
