// Acceptance battery for the whole pipeline. Each criterion prints exactly
// one PASS/FAIL line with its worst observed deviation; the process exits
// nonzero if any criterion fails. Budgeted to finish well under ten minutes
// on one core.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "qctx/graph.hpp"
#include "qctx/io.hpp"
#include "qctx/measurement.hpp"
#include "qctx/optimizer.hpp"
#include "qctx/spectral.hpp"
#include "qctx/state.hpp"

using namespace qctx;
namespace fs = std::filesystem;

namespace {

const double kSqrt5 = std::sqrt(5.0);
const double kPhi = (5.0 - kSqrt5) / 2.0;

int g_failures = 0;
int g_index = 0;

OptimizerConfig config(int starts, std::uint64_t seed = 1) {
    OptimizerConfig cfg;
    cfg.starts = starts;
    cfg.seed = seed;
    return cfg;
}

void criterion(const std::string& name, const std::function<std::pair<bool, double>()>& body) {
    ++g_index;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    double dev = -1.0;
    std::string note;
    try {
        auto [o, d] = body();
        ok = o;
        dev = d;
    } catch (const std::exception& e) {
        note = std::string("  [threw: ") + e.what() + "]";
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%2d] %s  %-62s worst %.3e  (%.1f s)%s\n", g_index, ok ? "PASS" : "FAIL",
                name.c_str(), dev, dt, note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double track(double& worst, double dev) {
    worst = std::max(worst, dev);
    return dev;
}

// ---- criterion bodies ------------------------------------------------------

std::pair<bool, double> pure_state_bounds() {
    OptimizerConfig cfg = config(16);
    double worst = 0.0;
    track(worst, std::abs(pure_state_optimum(make_kcbs_graph(), cfg) - kSqrt5));
    track(worst, std::abs(pure_state_optimum(make_kk_graph(), cfg) - 10.0 / 3.0));
    return {worst <= 1e-6, worst};
}

std::pair<bool, double> fixed_table_spectra() {
    double worst = 0.0;
    auto probe = [&](const MeasurementSet& ms, double a, double b, double c) {
        OverallMatrix om = overall_matrix(ms);
        track(worst, std::abs(om.spectrum[0] - a));
        track(worst, std::abs(om.spectrum[1] - b));
        track(worst, std::abs(om.spectrum[2] - c));
        track(worst, max_edge_residual(ms.vectors, ms.graph));
        track(worst, max_unit_deviation(ms.vectors));
    };
    probe(table_1a(), 2.0, 2.0, 1.0);
    probe(table_1b(), kSqrt5, kPhi, kPhi);
    probe(table_2(), 10.0 / 3.0, 3.0, 8.0 / 3.0);
    return {worst <= 1e-12, worst};
}

std::pair<bool, double> closed_form_arcs() {
    OptimizerConfig cfg = config(16);
    double worst = 0.0;
    struct Row {
        ArcId arc;
        ExclusivityGraph g;
    };
    std::vector<Row> rows = {{ArcId::CD, make_kcbs_graph()},
                             {ArcId::AD, make_kcbs_graph()},
                             {ArcId::EF, make_kk_graph()},
                             {ArcId::FG, make_kk_graph()},
                             {ArcId::EG, make_kk_graph()}};
    for (const Row& r : rows) {
        std::vector<CurvePoint> pts = trace_arc_numeric(r.arc, r.g, 21, cfg);
        for (const CurvePoint& p : pts) track(worst, std::abs(p.cq - arc_cq(r.arc, p.s)));
    }
    return {worst <= 1e-4, worst};
}

std::pair<bool, double> entropy_extremes_and_crossing() {
    OptimizerConfig cfg = config(8);
    double worst = 0.0;
    // endpoint values at the corners of both envelope curves; the interior
    // corners C and F sit on the upper branch (the rank-2 family is the more
    // contextual end at fixed entropy)
    track(worst, std::abs(mcms_upper(make_kcbs_graph(), 0.0, cfg).value - kSqrt5));
    track(worst, std::abs(mcms_upper(make_kcbs_graph(), 0.75, cfg).value - 2.0));
    track(worst, std::abs(mcms_lower(make_kcbs_graph(), 1.0, cfg).value - 5.0 / 3.0));
    track(worst, std::abs(mcms_upper(make_kk_graph(), 0.0, cfg).value - 10.0 / 3.0));
    track(worst, std::abs(mcms_upper(make_kk_graph(), 2.0 / 3.0, cfg).value - 29.0 / 9.0));
    track(worst, std::abs(mcms_upper(make_kk_graph(), 1.0, cfg).value - 3.0));
    bool ok = worst <= 1e-4;

    // entropy where even the least contextual state stops beating the
    // classical bound 2: bisection of mcms_lower - 2 against the closed form
    double lo = 0.6, hi = 0.7;
    double glo = mcms_lower(make_kcbs_graph(), lo, cfg).value - 2.0;
    double ghi = mcms_lower(make_kcbs_graph(), hi, cfg).value - 2.0;
    ok = ok && glo > 0.0 && ghi < 0.0;
    for (int it = 0; it < 12; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = mcms_lower(make_kcbs_graph(), mid, cfg).value - 2.0;
        (g > 0.0 ? lo : hi) = mid;
    }
    double star = 3.0 * (11.0 - kSqrt5) / 40.0;
    double cross_dev = std::abs(0.5 * (lo + hi) - star);
    ok = ok && cross_dev <= 1e-3;
    return {ok, std::max(worst, cross_dev)};
}

std::pair<bool, double> rank2_arc_trace_monotone() {
    // the rank-2 arc has no closed form; its numeric trace must fall
    // monotonically from sqrt(5) at s = 0 to 2 at s = 3/4
    OptimizerConfig cfg = config(8);
    std::vector<CurvePoint> pts = trace_arc_numeric(ArcId::AC, make_kcbs_graph(), 13, cfg);
    double worst = 0.0;
    double prev = 1e300;
    bool mono = true;
    for (const CurvePoint& p : pts) {
        if (p.cq > prev + 1e-7) mono = false;
        prev = p.cq;
    }
    track(worst, std::abs(pts.front().cq - kSqrt5));
    bool ok = mono && std::abs(pts.front().cq - kSqrt5) <= 1e-5 &&
              std::abs(pts.back().cq - 2.0) <= 1e-3;
    track(worst, std::abs(pts.back().cq - 2.0));
    return {ok, worst};
}

std::pair<bool, double> aligned_table_matches_optimizer() {
    OptimizerConfig cfg = config(16);
    MeasurementSet aligned = align_to_state(table_2());
    ExclusivityGraph kk = make_kk_graph();
    double worst = 0.0;
    for (ArcId arc : {ArcId::EF, ArcId::FG, ArcId::EG}) {
        auto [lo, hi] = arc_domain(arc);
        for (int i = 0; i <= 20; ++i) {
            double s = lo + (hi - lo) * i / 20.0;
            QutritSpectrum rho = arc_state(arc, s);
            double via_table = contextuality_value(rho, aligned);
            double via_opt = optimize_measurements(rho, kk, cfg).value;
            track(worst, std::abs(via_table - via_opt));
        }
    }
    return {worst <= 1e-5, worst};
}

std::pair<bool, double> fixed_tables_fall_short() {
    OptimizerConfig cfg = config(16);
    ExclusivityGraph kcbs = make_kcbs_graph();
    double worst_margin = 1e300;  // smallest observed shortfall must stay > 1e-3
    for (double s : {0.2, 0.3, 0.45, 0.6, 0.7}) {
        QutritSpectrum rho = arc_state(ArcId::AC, s);
        double best_fixed =
            std::max(rho.l1 * 2.0 + rho.l2 * 2.0 + rho.l3 * 1.0,
                     rho.l1 * kSqrt5 + rho.l2 * kPhi + rho.l3 * kPhi);
        double opt = optimize_measurements(rho, kcbs, cfg).value;
        worst_margin = std::min(worst_margin, opt - best_fixed);
    }
    return {worst_margin > 1e-3, worst_margin};
}

std::pair<bool, double> spectral_slopes() {
    OptimizerConfig cfg = config(16);
    double worst = 0.0;
    bool ok = true;

    // 5-cycle: spectra of per-state optimal sets along the rank-2 family
    std::vector<QutritSpectrum> family;
    for (int i = 0; i < 41; ++i) family.push_back(arc_state(ArcId::AC, 0.75 * i / 40.0));
    SpectralCurve curve = spectral_curve(make_kcbs_graph(), family, cfg);
    std::vector<SpectralPoint> pts = curve.points;
    std::sort(pts.begin(), pts.end(),
              [](const SpectralPoint& a, const SpectralPoint& b) { return a.m1 < b.m1; });
    ok = ok && pts.size() >= 3;
    if (ok) {
        track(worst, std::abs(pts.front().m1 - 2.0));
        track(worst, std::abs(pts.front().m2 - 2.0));
        track(worst, std::abs(pts.back().m1 - kSqrt5));
        track(worst, std::abs(pts.back().m2 - kPhi));
        ok = ok && worst <= 1e-3;
        SlopeReport rep = curve_slope_analysis(pts);
        ok = ok && rep.dm2_all_below_minus_one && rep.dm3_all_positive;
    }

    // 13-edge graph: the feasible-spectrum segment with m2 pinned at 3
    OptimizerConfig tcfg = config(8);
    std::vector<SpectralPoint> seg = feasible_spectrum_trace(make_kk_graph(), 21, tcfg);
    ok = ok && seg.size() >= 3;
    if (seg.size() >= 3) {
        double m2dev = 0.0;
        for (const SpectralPoint& p : seg) m2dev = std::max(m2dev, std::abs(p.m2 - 3.0));
        ok = ok && m2dev <= 1e-4;
        double span_dev = std::max(std::abs(seg.front().m1 - 3.0),
                                   std::abs(seg.back().m1 - 10.0 / 3.0));
        track(worst, span_dev);
        ok = ok && span_dev <= 1e-3;
        SlopeReport rep = curve_slope_analysis(seg);
        ok = ok && rep.dm3_all_nonpositive;
        track(worst, m2dev);
    }
    return {ok, worst};
}

std::pair<bool, double> trace_inequality_battery() {
    LemmaSuiteResult res = trace_inequality_suite(10000, 0, {2, 3, 5, 9});
    double worst = std::max(res.max_violation, res.max_witness_dev);
    bool ok = res.trials == 10000 && res.max_violation <= 1e-10 && res.max_witness_dev <= 1e-10;
    for (int n : {2, 3, 5}) {
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back(static_cast<double>(3 * (n - i)));
            b.push_back(static_cast<double>(n - i) / n);
        }
        PermutationCheck pc = permutation_maximum_check(a, b);
        ok = ok && pc.identity_is_max;
        worst = std::max(worst, pc.best_value - pc.identity_value);
    }
    return {ok, worst};
}

std::pair<bool, double> independence_exact() {
    int a5 = independence_number(make_kcbs_graph());
    int a9 = independence_number(make_kk_graph());
    int o5 = oracle::brute_force_independence(make_kcbs_graph());
    int o9 = oracle::brute_force_independence(make_kk_graph());
    bool ok = a5 == 2 && a9 == 3 && o5 == 2 && o9 == 3;
    return {ok, std::abs(a5 - 2) + std::abs(a9 - 3) + std::abs(o5 - 2) + std::abs(o9 - 3)};
}

std::pair<bool, double> determinism_and_gradient() {
    // byte-identical CLI reruns
    fs::path tmp = fs::temp_directory_path() / "qctx_acceptance";
    fs::create_directories(tmp);
    fs::path f1 = tmp / "det1.csv", f2 = tmp / "det2.csv";
    std::string base = std::string(QCTX_CLI_PATH) +
                       " curve --inequality kcbs --bound lower --samples 3 --starts 4 --seed 7"
                       " --out ";
    auto run = [](const std::string& cmd) {
        int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
    };
    bool ok = run(base + f1.string()) && run(base + f2.string());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    };
    std::string c1 = slurp(f1), c2 = slurp(f2);
    ok = ok && !c1.empty() && c1 == c2;

    // analytic gradient of the penalized objective vs central differences
    double worst_rel = 0.0;
    const double mus[4] = {0.0, 1.0, 10.0, 1e3};
    for (int t = 0; t < 100; ++t) {
        RngStream rng(31, static_cast<std::uint64_t>(t));
        ExclusivityGraph g = t % 2 == 0 ? make_kcbs_graph() : make_kk_graph();
        std::vector<Vec3> v;
        for (int i = 0; i < g.n; ++i) v.push_back(rng.unit_vec3());
        double raw[3] = {std::abs(rng.gaussian()), std::abs(rng.gaussian()),
                         std::abs(rng.gaussian())};
        std::sort(raw, raw + 3, std::greater<>());
        double sum = raw[0] + raw[1] + raw[2];
        QutritSpectrum rho(raw[0] / sum, raw[1] / sum, raw[2] / sum);
        double mu = mus[t % 4];
        auto fd = oracle::fd_gradient(
            [&](const std::vector<Vec3>& w) { return penalized_objective(w, rho, g, mu); }, v,
            1e-6);
        auto an = penalized_gradient(v, rho, g, mu);
        double scale = 1.0, dev = 0.0;
        for (size_t i = 0; i < v.size(); ++i)
            for (int c = 0; c < 3; ++c) {
                scale = std::max(scale, std::abs(an[i][static_cast<size_t>(c)]));
                dev = std::max(dev, std::abs(an[i][static_cast<size_t>(c)] -
                                             fd[i][static_cast<size_t>(c)]));
            }
        worst_rel = std::max(worst_rel, dev / scale);
    }
    ok = ok && worst_rel <= 1e-6;
    return {ok, worst_rel};
}

}  // namespace

int main() {
    std::printf("acceptance battery: contextuality library + CLI\n");
    criterion("pure-state optima reach sqrt(5) and 10/3 (1e-6)", pure_state_bounds);
    criterion("fixed tables reproduce their overall spectra (1e-12)", fixed_table_spectra);
    criterion("optimizer matches closed forms on CD/AD/EF/FG/EG (1e-4)", closed_form_arcs);
    criterion("entropy-extreme endpoints and classical crossing (1e-4/1e-3)",
              entropy_extremes_and_crossing);
    criterion("rank-2 5-cycle arc monotone with pinned ends (1e-5/1e-3)",
              rank2_arc_trace_monotone);
    criterion("aligned 9-vector table is optimal along EF/FG/EG (1e-5)",
              aligned_table_matches_optimizer);
    criterion("both fixed 5-cycle tables fall short on rank-2 states (>1e-3)",
              fixed_tables_fall_short);
    criterion("optimal-set spectra: endpoints and slope signs", spectral_slopes);
    criterion("randomized trace-inequality suite holds (1e-10)", trace_inequality_battery);
    criterion("independence numbers are exactly 2 and 3", independence_exact);
    criterion("byte-identical CLI reruns + analytic gradient (1e-6)", determinism_and_gradient);

    std::printf("ACCEPTANCE: %d/11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
