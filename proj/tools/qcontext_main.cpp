// qcontext: contextuality curves, spectral analysis, and table verification
// for the 5-cycle (KCBS) and 13-edge (KK) noncontextuality inequalities.
//
// Exit codes: 0 success, 1 verification failure, 2 bad usage, 3 IO error,
// 4 optimizer infeasibility.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qctx/graph.hpp"
#include "qctx/io.hpp"
#include "qctx/measurement.hpp"
#include "qctx/optimizer.hpp"
#include "qctx/spectral.hpp"
#include "qctx/state.hpp"
#include "qctx/version.hpp"

namespace {

using namespace qctx;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    int starts = 0;
    bool seed_set = false;
    bool starts_set = false;
};

// precedence: CLI flag > JSON config file > built-in default
OptimizerConfig resolve_config(const CommonOpts& c) {
    OptimizerConfig cfg;
    if (!c.config_path.empty()) cfg = config_from_json(read_file(c.config_path));
    if (c.seed_set) cfg.seed = c.seed;
    if (c.starts_set) cfg.starts = c.starts;
    cfg.validate();
    return cfg;
}

ExclusivityGraph graph_for(const std::string& name) {
    if (name == "kcbs") return make_kcbs_graph();
    if (name == "kk") return make_kk_graph();
    throw CLI::ValidationError("--inequality", "expected kcbs or kk, got '" + name + "'");
}

int check(bool ok, const std::string& name, double residual, int& failures) {
    std::printf("%s  %-58s residual %.3e\n", ok ? "PASS" : "FAIL", name.c_str(), residual);
    if (!ok) ++failures;
    return ok ? 0 : 1;
}

int cmd_verify_tables() {
    int failures = 0;
    const double s5 = std::sqrt(5.0);
    const double phi = (5.0 - s5) / 2.0;

    MeasurementSet t1a = table_1a();
    MeasurementSet t1b = table_1b();
    MeasurementSet t2 = table_2();

    auto spec_err = [](const MeasurementSet& ms, double a, double b, double c) {
        auto sp = overall_matrix(ms).spectrum;
        return std::max({std::abs(sp[0] - a), std::abs(sp[1] - b), std::abs(sp[2] - c)});
    };
    double e = spec_err(t1a, 2.0, 2.0, 1.0);
    check(e <= 1e-12, "table 1(a) spectrum (2, 2, 1)", e, failures);
    e = spec_err(t1b, s5, phi, phi);
    check(e <= 1e-12, "table 1(b) spectrum (sqrt5, (5-sqrt5)/2, (5-sqrt5)/2)", e, failures);
    e = spec_err(t2, 10.0 / 3.0, 3.0, 8.0 / 3.0);
    check(e <= 1e-12, "table 2 spectrum (10/3, 3, 8/3)", e, failures);

    const std::vector<std::pair<const MeasurementSet*, const char*>> tables = {
        {&t1a, "table 1(a)"}, {&t1b, "table 1(b)"}, {&t2, "table 2"}};
    for (auto [ms, name] : tables) {
        double r = max_edge_residual(ms->vectors, ms->graph);
        check(r <= 1e-12, std::string(name) + " edge orthogonality", r, failures);
        double tr = 0.0;
        auto m = overall_matrix(*ms).m;
        for (int i = 0; i < 3; ++i) tr += m(i, i);
        double dev = std::abs(tr - ms->graph.n);
        check(dev <= 1e-12, std::string(name) + " trace(M) = n", dev, failures);
    }

    // the KK graph must equal exactly the orthogonal pairs of table 2
    {
        ExclusivityGraph kk = make_kk_graph();
        bool match = true;
        double worst = 0.0;
        for (int i = 1; i <= 9; ++i)
            for (int j = i + 1; j <= 9; ++j) {
                double ip = std::abs(dot(t2.vectors[static_cast<size_t>(i - 1)],
                                         t2.vectors[static_cast<size_t>(j - 1)]));
                bool orth = ip <= 1e-8;
                if (orth != has_edge(kk, i, j)) match = false;
                if (has_edge(kk, i, j)) worst = std::max(worst, ip);
                else worst = std::max(worst, orth ? 1.0 : 0.0);
            }
        check(match, "KK graph = orthogonal pairs of table 2 (13 edges)", worst, failures);
    }
    // KCBS non-edges of table 1(b) are non-orthogonal
    {
        ExclusivityGraph kcbs = make_kcbs_graph();
        double min_nonedge = 1e300;
        for (int i = 1; i <= 5; ++i)
            for (int j = i + 1; j <= 5; ++j)
                if (!has_edge(kcbs, i, j))
                    min_nonedge = std::min(min_nonedge,
                                           std::abs(dot(t1b.vectors[static_cast<size_t>(i - 1)],
                                                        t1b.vectors[static_cast<size_t>(j - 1)])));
        check(min_nonedge > 1e-3, "table 1(b) non-edges are non-orthogonal", min_nonedge, failures);
    }

    int a_kcbs = independence_number(make_kcbs_graph());
    check(a_kcbs == 2, "independence number KCBS = 2", std::abs(a_kcbs - 2), failures);
    int a_kk = independence_number(make_kk_graph());
    check(a_kk == 3, "independence number KK = 3", std::abs(a_kk - 3), failures);

    QutritSpectrum pure(1, 0, 0);
    double raw = contextuality_value(pure, t2);
    check(std::abs(raw - 19.0 / 6.0) <= 1e-12, "raw table 2 value at (1,0,0) = 19/6",
          std::abs(raw - 19.0 / 6.0), failures);
    double aligned = contextuality_value(pure, align_to_state(t2));
    check(std::abs(aligned - 10.0 / 3.0) <= 1e-12, "aligned table 2 value at (1,0,0) = 10/3",
          std::abs(aligned - 10.0 / 3.0), failures);
    double b_val = contextuality_value(pure, t1b);
    check(std::abs(b_val - s5) <= 1e-12, "table 1(b) value at (1,0,0) = sqrt5",
          std::abs(b_val - s5), failures);
    double c_val = contextuality_value(QutritSpectrum(0.5, 0.5, 0.0), t1a);
    check(std::abs(c_val - 2.0) <= 1e-12, "table 1(a) value at (1/2,1/2,0) = 2",
          std::abs(c_val - 2.0), failures);

    std::printf("%s: %d check(s) failed\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}

int cmd_curve(const std::string& ineq, const std::string& bound, int samples,
              const std::string& out, const CommonOpts& common, const std::string& cmdline) {
    if (samples < 2) throw CLI::ValidationError("--samples", "must be >= 2");
    OptimizerConfig cfg = resolve_config(common);
    ExclusivityGraph g = graph_for(ineq);
    bool upper = bound == "upper";
    if (!upper && bound != "lower")
        throw CLI::ValidationError("--bound", "expected upper or lower, got '" + bound + "'");
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < samples; ++i) {
        double s = static_cast<double>(i) / (samples - 1);
        McmsPoint p = upper ? mcms_upper(g, s, cfg) : mcms_lower(g, s, cfg);
        rows.push_back({s, p.value, p.state.l1, p.state.l2, p.state.l3});
    }
    write_csv(out, "s,cq,lambda1,lambda2,lambda3", rows);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest({cmdline, cfg, cfg.seed, std::string(k_version), dt, out,
                    static_cast<long>(rows.size())});
    std::printf("wrote %zu rows to %s (%.1f s)\n", rows.size(), out.c_str(), dt);
    return 0;
}

void print_slopes(const SlopeReport& rep) {
    std::printf("slopes over %zu consecutive pairs:\n", rep.dm2.size());
    std::printf("  dm2/dm1 in [%.6f, %.6f]%s%s\n", rep.min_dm2, rep.max_dm2,
                rep.dm2_all_below_minus_one ? "  (all < -1)" : "",
                rep.dm2_all_within_1e4 ? "  (|dm2/dm1| <= 1e-4: m2 constant)" : "");
    std::printf("  dm3/dm1 in [%.6f, %.6f]%s%s\n", rep.min_dm3, rep.max_dm3,
                rep.dm3_all_positive ? "  (all > 0)" : "",
                rep.dm3_all_nonpositive ? "  (all <= 0)" : "");
    std::printf("  identity |dm3 + 1 + dm2| worst: %.3e\n", rep.max_identity_dev);
}

int cmd_spectral(const std::string& ineq, int samples, const std::string& out,
                 const CommonOpts& common, const std::string& cmdline) {
    if (samples < 3) throw CLI::ValidationError("--samples", "must be >= 3");
    OptimizerConfig cfg = resolve_config(common);
    ExclusivityGraph g = graph_for(ineq);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<double>> rows;
    if (ineq == "kcbs") {
        // spectra of per-state optimal sets along the rank-2 (zero-lambda3) arc
        std::vector<QutritSpectrum> family;
        std::vector<double> svals;
        for (int i = 0; i < samples; ++i) {
            double s = 0.75 * static_cast<double>(i) / (samples - 1);
            family.push_back(arc_state(ArcId::AC, s));
            svals.push_back(s);
        }
        SpectralCurve curve = spectral_curve(g, family, cfg);
        for (size_t i = 0; i < curve.points.size(); ++i) {
            const SpectralPoint& p = curve.points[i];
            rows.push_back({p.m1, p.m2, p.m3,
                            svals[static_cast<size_t>(curve.source_index[i])]});
        }
    } else {
        // per-state optima collapse to one point for this inequality, so walk
        // the feasible-spectrum segment; the trailing column is the
        // normalized trace coordinate
        std::vector<SpectralPoint> pts = feasible_spectrum_trace(g, samples, cfg);
        double lo = pts.front().m1, hi = pts.back().m1;
        for (const SpectralPoint& p : pts)
            rows.push_back({p.m1, p.m2, p.m3, hi > lo ? (p.m1 - lo) / (hi - lo) : 0.0});
    }
    std::sort(rows.begin(), rows.end(),
              [](const std::vector<double>& a, const std::vector<double>& b) { return a[0] < b[0]; });
    write_csv(out, "m1,m2,m3,s", rows);
    if (rows.size() >= 3) {
        std::vector<SpectralPoint> sorted;
        for (const auto& r : rows) sorted.push_back({r[0], r[1], r[2]});
        print_slopes(curve_slope_analysis(sorted));
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest({cmdline, cfg, cfg.seed, std::string(k_version), dt, out,
                    static_cast<long>(rows.size())});
    std::printf("wrote %zu rows to %s (%.1f s)\n", rows.size(), out.c_str(), dt);
    return 0;
}

int cmd_lemma(long trials, std::uint64_t seed, std::vector<int> dims) {
    if (trials < 1) throw CLI::ValidationError("--trials", "must be >= 1");
    if (dims.empty()) dims = {2, 3, 5, 9};
    LemmaSuiteResult res = trace_inequality_suite(trials, seed, dims);
    std::printf("trace-inequality suite: %ld trials, dims {", res.trials);
    for (size_t i = 0; i < dims.size(); ++i)
        std::printf("%s%d", i ? "," : "", dims[static_cast<size_t>(i)]);
    std::printf("}\n");
    std::printf("  max violation lhs - rhs : %.3e (must be <= 1e-10)\n", res.max_violation);
    std::printf("  worst witness row/col   : %.3e (must be <= 1e-10)\n", res.max_witness_dev);
    std::printf("  worst |lhs - a.W.b|     : %.3e\n", res.max_identity_dev);
    bool ok = res.max_violation <= 1e-10 && res.max_witness_dev <= 1e-10;
    // exhaustive permutation cross-check at small n
    for (int n : dims) {
        if (n > 5) continue;
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            a.push_back(static_cast<double>(2 * (n - i)));
            b.push_back(static_cast<double>(n - i));
        }
        PermutationCheck pc = permutation_maximum_check(a, b);
        std::printf("  n=%d permutations: identity %s (best %.6f, identity %.6f)\n", n,
                    pc.identity_is_max ? "maximal" : "NOT maximal", pc.best_value,
                    pc.identity_value);
        ok = ok && pc.identity_is_max;
    }
    std::printf("%s\n", ok ? "OK" : "FAILED");
    return ok ? 0 : 1;
}

int cmd_surface(const std::string& out, int grid, const CommonOpts& common,
                const std::string& cmdline) {
    if (grid < 2) throw CLI::ValidationError("--grid", "must be >= 2");
    OptimizerConfig cfg = resolve_config(common);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SurfaceSample> samples = diagonal_violation_surface(table_1b(), grid);
    std::vector<std::vector<double>> rows;
    for (const SurfaceSample& s : samples) rows.push_back({s.l1, s.l2, s.cq});
    write_csv(out, "lambda1,lambda2,cq", rows);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest({cmdline, cfg, cfg.seed, std::string(k_version), dt, out,
                    static_cast<long>(rows.size())});
    std::printf("wrote %zu rows to %s (%.1f s)\n", rows.size(), out.c_str(), dt);
    return 0;
}

int cmd_theta(const std::string& ineq, const CommonOpts& common) {
    OptimizerConfig cfg = resolve_config(common);
    ExclusivityGraph g;
    if (ineq == "kcbs" || ineq == "kk") {
        g = graph_for(ineq);
    } else {
        // anything else is an edge-list path; a missing file is an IO error,
        // a malformed one a parse error
        (void)read_file(ineq);
        g = load_graph_file(ineq);
    }
    double v = pure_state_optimum(g, cfg);
    std::printf("theta(%s) = %.15f  (n = %d, %zu edges)\n", ineq.c_str(), v, g.n, g.edges.size());
    return 0;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contextuality of qutrit mixed states: curves, spectra, verification"};
    app.require_subcommand(1);
    std::string cmdline = join_args(argc, argv);

    CommonOpts common;
    std::string ineq = "kcbs", bound = "upper", out;
    int samples = 41, grid = 50;
    long trials = 10000;
    std::vector<int> dims;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "RNG seed")->each([&](const std::string&) {
            common.seed_set = true;
        });
        sub->add_option("--starts", common.starts, "multistart count")
            ->each([&](const std::string&) { common.starts_set = true; });
        sub->add_option("--config", common.config_path, "JSON optimizer config");
    };

    CLI::App* verify = app.add_subcommand("verify-tables", "check the fixed measurement tables");
    (void)verify;

    CLI::App* curve = app.add_subcommand("curve", "mixed-state contextuality bound vs entropy");
    curve->add_option("--inequality", ineq, "kcbs | kk")->required();
    curve->add_option("--bound", bound, "upper | lower")->required();
    curve->add_option("--samples", samples, "uniform s samples (default 41)");
    curve->add_option("--out", out, "output CSV path")->required();
    add_common(curve);

    CLI::App* spectral = app.add_subcommand("spectral", "optimal-set spectrum curve (m1,m2,m3)");
    spectral->add_option("--inequality", ineq, "kcbs | kk")->required();
    spectral->add_option("--samples", samples, "curve samples (default 41)");
    spectral->add_option("--out", out, "output CSV path")->required();
    add_common(spectral);

    CLI::App* lemma = app.add_subcommand("lemma", "randomized trace-inequality suite");
    lemma->add_option("--trials", trials, "trial count (default 10000)");
    lemma->add_option("--seed", common.seed, "RNG seed");
    lemma->add_option("--dims", dims, "matrix sizes (default 2 3 5 9)");

    CLI::App* surface = app.add_subcommand("surface", "diagonal-state violation surface (KCBS)");
    surface->add_option("--out", out, "output CSV path")->required();
    surface->add_option("--grid", grid, "barycentric grid resolution (default 50)");
    add_common(surface);

    CLI::App* theta = app.add_subcommand("theta", "pure-state optimum (Lovasz-number route)");
    theta->add_option("--inequality", ineq, "kcbs | kk | edge-list path")->required();
    add_common(theta);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(verify)) return cmd_verify_tables();
        if (app.got_subcommand(curve)) return cmd_curve(ineq, bound, samples, out, common, cmdline);
        if (app.got_subcommand(spectral)) return cmd_spectral(ineq, samples, out, common, cmdline);
        if (app.got_subcommand(lemma)) return cmd_lemma(trials, common.seed, dims);
        if (app.got_subcommand(surface)) return cmd_surface(out, grid, common, cmdline);
        if (app.got_subcommand(theta)) return cmd_theta(ineq, common);
        std::fprintf(stderr, "no subcommand\n");
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qctx::io_error& e) {
        std::fprintf(stderr, "IO error: %s\n", e.what());
        return 3;
    } catch (const qctx::infeasible_error& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return 4;
    } catch (const qctx::parse_error& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "bad input: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "bad input: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
