#include "qctx/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace qctx {

void OptimizerConfig::validate() const {
    if (starts < 1) throw std::invalid_argument("OptimizerConfig: starts must be >= 1");
    if (penalty_schedule.empty())
        throw std::invalid_argument("OptimizerConfig: empty penalty schedule");
    for (size_t i = 0; i < penalty_schedule.size(); ++i) {
        if (penalty_schedule[i] <= 0.0)
            throw std::invalid_argument("OptimizerConfig: penalty weights must be positive");
        if (i > 0 && penalty_schedule[i] <= penalty_schedule[i - 1])
            throw std::invalid_argument("OptimizerConfig: penalty schedule must increase strictly");
    }
    if (max_iters < 1) throw std::invalid_argument("OptimizerConfig: max_iters must be >= 1");
    if (objective_tol <= 0.0 || feasibility_tol <= 0.0)
        throw std::invalid_argument("OptimizerConfig: tolerances must be positive");
}

double penalized_objective(const std::vector<Vec3>& v, const QutritSpectrum& rho,
                           const ExclusivityGraph& g, double mu) {
    double f = 0.0;
    for (const Vec3& x : v)
        f += rho.l1 * x[0] * x[0] + rho.l2 * x[1] * x[1] + rho.l3 * x[2] * x[2];
    for (auto [i, j] : g.edges) {
        double ip = dot(v[static_cast<size_t>(i - 1)], v[static_cast<size_t>(j - 1)]);
        f -= mu * ip * ip;
    }
    return f;
}

std::vector<Vec3> penalized_gradient(const std::vector<Vec3>& v, const QutritSpectrum& rho,
                                     const ExclusivityGraph& g, double mu) {
    std::vector<Vec3> grad(v.size(), Vec3{0, 0, 0});
    for (size_t i = 0; i < v.size(); ++i) {
        grad[i][0] = 2.0 * rho.l1 * v[i][0];
        grad[i][1] = 2.0 * rho.l2 * v[i][1];
        grad[i][2] = 2.0 * rho.l3 * v[i][2];
    }
    for (auto [i, j] : g.edges) {
        size_t a = static_cast<size_t>(i - 1), b = static_cast<size_t>(j - 1);
        double ip = dot(v[a], v[b]);
        for (int k = 0; k < 3; ++k) {
            grad[a][k] -= 2.0 * mu * ip * v[b][k];
            grad[b][k] -= 2.0 * mu * ip * v[a][k];
        }
    }
    return grad;
}

double max_edge_residual(const std::vector<Vec3>& v, const ExclusivityGraph& g) {
    double r = 0.0;
    for (auto [i, j] : g.edges)
        r = std::max(r, std::abs(dot(v[static_cast<size_t>(i - 1)],
                                     v[static_cast<size_t>(j - 1)])));
    return r;
}

double max_unit_deviation(const std::vector<Vec3>& v) {
    double r = 0.0;
    for (const Vec3& x : v) r = std::max(r, std::abs(dot(x, x) - 1.0));
    return r;
}

namespace {

double objective(const std::vector<Vec3>& v, const QutritSpectrum& rho) {
    double f = 0.0;
    for (const Vec3& x : v)
        f += rho.l1 * x[0] * x[0] + rho.l2 * x[1] * x[1] + rho.l3 * x[2] * x[2];
    return f;
}

// Projected gradient ascent on the product of spheres with backtracking.
void gradient_stage(std::vector<Vec3>& v, const QutritSpectrum& rho, const ExclusivityGraph& g,
                    double mu, int iters, double tol) {
    double f = penalized_objective(v, rho, g, mu);
    double step = 0.05;
    for (int it = 0; it < iters; ++it) {
        std::vector<Vec3> grad = penalized_gradient(v, rho, g, mu);
        // project onto the tangent of each sphere
        double gn2 = 0.0;
        for (size_t i = 0; i < v.size(); ++i) {
            double c = dot(grad[i], v[i]);
            for (int k = 0; k < 3; ++k) grad[i][k] -= c * v[i][k];
            gn2 += dot(grad[i], grad[i]);
        }
        if (gn2 < 1e-28) break;
        std::vector<Vec3> w(v.size());
        double fn = f;
        for (;;) {
            for (size_t i = 0; i < v.size(); ++i) {
                Vec3 y = {v[i][0] + step * grad[i][0], v[i][1] + step * grad[i][1],
                          v[i][2] + step * grad[i][2]};
                w[i] = normalized(y);
            }
            fn = penalized_objective(w, rho, g, mu);
            if (fn >= f + 1e-4 * step * gn2 || step < 1e-16) break;
            step *= 0.5;
        }
        if (step < 1e-16) break;
        double fprev = f;
        v.swap(w);
        f = fn;
        step *= 1.3;
        if (std::abs(f - fprev) < tol * std::max(1.0, std::abs(f))) break;
    }
}

// Exact block update: v_i <- top eigenvector of diag(lambda) - mu * sum of
// neighbor projectors; keeps sign continuity with the previous vector.
void bcd_stage(std::vector<Vec3>& v, const QutritSpectrum& rho, const ExclusivityGraph& g,
               const std::vector<std::vector<int>>& nbr, double mu, int sweeps, double tol) {
    double prev = penalized_objective(v, rho, g, mu);
    for (int s = 0; s < sweeps; ++s) {
        for (size_t i = 0; i < v.size(); ++i) {
            Mat3 a = mat3_zero();
            a(0, 0) = rho.l1;
            a(1, 1) = rho.l2;
            a(2, 2) = rho.l3;
            for (int j : nbr[i]) add_outer(a, v[static_cast<size_t>(j)], -mu);
            SymEigen3 eig = sym_eigen3(a);
            Vec3 top = {eig.v(0, 0), eig.v(1, 0), eig.v(2, 0)};
            if (dot(top, v[i]) < 0.0)
                for (int k = 0; k < 3; ++k) top[k] = -top[k];
            v[i] = top;
        }
        double f = penalized_objective(v, rho, g, mu);
        if (std::abs(f - prev) < tol * std::max(1.0, std::abs(f))) break;
        prev = f;
    }
}

// Levenberg-damped Newton on the first-order system
//   diag(lambda) v_i - eta_i v_i - sum_{e=(i,j)} nu_e v_j = 0,
//   |v_i|^2 = 1,  v_i . v_j = 0 on edges.
// Multipliers are initialized from the current iterate. Reduces the combined
// residual; constraint feasibility is re-pinned by the caller afterwards.
void kkt_polish(std::vector<Vec3>& v, const QutritSpectrum& rho, const ExclusivityGraph& g,
                int iters = 40) {
    int n = static_cast<int>(v.size());
    int ne = static_cast<int>(g.edges.size());
    int nv = 3 * n + n + ne;
    std::array<double, 3> lam = {rho.l1, rho.l2, rho.l3};
    // per-vertex incident edges as (edge index, other endpoint), 0-based
    std::vector<std::vector<std::pair<int, int>>> inc(static_cast<size_t>(n));
    for (int e = 0; e < ne; ++e) {
        auto [i, j] = g.edges[static_cast<size_t>(e)];
        inc[static_cast<size_t>(i - 1)].push_back({e, j - 1});
        inc[static_cast<size_t>(j - 1)].push_back({e, i - 1});
    }
    std::vector<double> eta(static_cast<size_t>(n)), nu(static_cast<size_t>(ne));
    for (int i = 0; i < n; ++i) {
        const Vec3& x = v[static_cast<size_t>(i)];
        eta[static_cast<size_t>(i)] =
            lam[0] * x[0] * x[0] + lam[1] * x[1] * x[1] + lam[2] * x[2] * x[2];
    }
    for (int e = 0; e < ne; ++e) {
        auto [i, j] = g.edges[static_cast<size_t>(e)];
        const Vec3& a = v[static_cast<size_t>(i - 1)];
        const Vec3& b = v[static_cast<size_t>(j - 1)];
        nu[static_cast<size_t>(e)] = lam[0] * a[0] * b[0] + lam[1] * a[1] * b[1] + lam[2] * a[2] * b[2];
    }
    auto residual = [&](const std::vector<Vec3>& vv, const std::vector<double>& ee,
                        const std::vector<double>& nn) {
        std::vector<double> r(static_cast<size_t>(nv), 0.0);
        for (int i = 0; i < n; ++i) {
            const Vec3& x = vv[static_cast<size_t>(i)];
            Vec3 ri = {lam[0] * x[0] - ee[static_cast<size_t>(i)] * x[0],
                       lam[1] * x[1] - ee[static_cast<size_t>(i)] * x[1],
                       lam[2] * x[2] - ee[static_cast<size_t>(i)] * x[2]};
            for (auto [e, j] : inc[static_cast<size_t>(i)])
                for (int k = 0; k < 3; ++k)
                    ri[k] -= nn[static_cast<size_t>(e)] * vv[static_cast<size_t>(j)][k];
            for (int k = 0; k < 3; ++k) r[static_cast<size_t>(3 * i + k)] = ri[k];
        }
        for (int i = 0; i < n; ++i)
            r[static_cast<size_t>(3 * n + i)] = dot(vv[static_cast<size_t>(i)], vv[static_cast<size_t>(i)]) - 1.0;
        for (int e = 0; e < ne; ++e) {
            auto [i, j] = g.edges[static_cast<size_t>(e)];
            r[static_cast<size_t>(3 * n + n + e)] =
                dot(vv[static_cast<size_t>(i - 1)], vv[static_cast<size_t>(j - 1)]);
        }
        return r;
    };
    auto maxabs = [](const std::vector<double>& r) {
        double m = 0.0;
        for (double x : r) m = std::max(m, std::abs(x));
        return m;
    };
    for (int it = 0; it < iters; ++it) {
        std::vector<double> r = residual(v, eta, nu);
        double rn = maxabs(r);
        if (rn < 1e-13) break;
        MatrixN jac(nv, nv);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < 3; ++k)
                jac.at(3 * i + k, 3 * i + k) = lam[static_cast<size_t>(k)] - eta[static_cast<size_t>(i)];
            for (int k = 0; k < 3; ++k) jac.at(3 * i + k, 3 * n + i) = -v[static_cast<size_t>(i)][k];
            for (auto [e, j] : inc[static_cast<size_t>(i)]) {
                for (int k = 0; k < 3; ++k)
                    jac.at(3 * i + k, 3 * j + k) -= nu[static_cast<size_t>(e)];
                for (int k = 0; k < 3; ++k)
                    jac.at(3 * i + k, 3 * n + n + e) = -v[static_cast<size_t>(j)][k];
            }
        }
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 3; ++k) jac.at(3 * n + i, 3 * i + k) = 2.0 * v[static_cast<size_t>(i)][k];
        for (int e = 0; e < ne; ++e) {
            auto [i, j] = g.edges[static_cast<size_t>(e)];
            for (int k = 0; k < 3; ++k) {
                jac.at(3 * n + n + e, 3 * (i - 1) + k) = v[static_cast<size_t>(j - 1)][k];
                jac.at(3 * n + n + e, 3 * (j - 1) + k) = v[static_cast<size_t>(i - 1)][k];
            }
        }
        // normal equations (J^T J + eps) d = -J^T r
        MatrixN jtj(nv, nv);
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j) {
                double s = 0.0;
                for (int k = 0; k < nv; ++k) s += jac.at(k, i) * jac.at(k, j);
                jtj.at(i, j) = s;
            }
        std::vector<double> jtr = matvec_t(jac, r);
        for (double& x : jtr) x = -x;
        std::vector<double> d;
        try {
            d = solve_spd(jtj, jtr, 1e-12);
        } catch (const std::runtime_error&) {
            break;  // singular beyond the ridge; keep the current iterate
        }
        auto apply = [&](double damp, std::vector<Vec3>& vo, std::vector<double>& eo,
                         std::vector<double>& no) {
            vo = v;
            eo = eta;
            no = nu;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < 3; ++k)
                    vo[static_cast<size_t>(i)][k] += damp * d[static_cast<size_t>(3 * i + k)];
            for (int i = 0; i < n; ++i) eo[static_cast<size_t>(i)] += damp * d[static_cast<size_t>(3 * n + i)];
            for (int e = 0; e < ne; ++e)
                no[static_cast<size_t>(e)] += damp * d[static_cast<size_t>(3 * n + n + e)];
        };
        std::vector<Vec3> vn;
        std::vector<double> en, nn;
        apply(1.0, vn, en, nn);
        if (maxabs(residual(vn, en, nn)) < rn) {
            v = vn;
            eta = en;
            nu = nn;
            continue;
        }
        double damp = 1.0;
        bool ok = false;
        for (int h = 0; h < 20; ++h) {
            damp *= 0.5;
            apply(damp, vn, en, nn);
            if (maxabs(residual(vn, en, nn)) < rn) {
                v = vn;
                eta = en;
                nu = nn;
                ok = true;
                break;
            }
        }
        if (!ok) break;
    }
}

}  // namespace

std::vector<Vec3> restore_feasible(std::vector<Vec3> v, const ExclusivityGraph& g, int iters) {
    int n = static_cast<int>(v.size());
    int ne = static_cast<int>(g.edges.size());
    int nc = n + ne;
    if (nc == 0) return v;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> c(static_cast<size_t>(nc));
        for (int i = 0; i < n; ++i)
            c[static_cast<size_t>(i)] = dot(v[static_cast<size_t>(i)], v[static_cast<size_t>(i)]) - 1.0;
        for (int e = 0; e < ne; ++e) {
            auto [i, j] = g.edges[static_cast<size_t>(e)];
            c[static_cast<size_t>(n + e)] =
                dot(v[static_cast<size_t>(i - 1)], v[static_cast<size_t>(j - 1)]);
        }
        double cmax = 0.0;
        for (double x : c) cmax = std::max(cmax, std::abs(x));
        if (cmax < 1e-14) break;
        MatrixN jac(nc, 3 * n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 3; ++k) jac.at(i, 3 * i + k) = 2.0 * v[static_cast<size_t>(i)][k];
        for (int e = 0; e < ne; ++e) {
            auto [i, j] = g.edges[static_cast<size_t>(e)];
            for (int k = 0; k < 3; ++k) {
                jac.at(n + e, 3 * (i - 1) + k) = v[static_cast<size_t>(j - 1)][k];
                jac.at(n + e, 3 * (j - 1) + k) = v[static_cast<size_t>(i - 1)][k];
            }
        }
        MatrixN jjt(nc, nc);
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < nc; ++b) {
                double s = 0.0;
                for (int k = 0; k < 3 * n; ++k) s += jac.at(a, k) * jac.at(b, k);
                jjt.at(a, b) = s;
            }
        for (double& x : c) x = -x;
        std::vector<double> y = solve_spd(jjt, c, 1e-14);
        std::vector<double> dv = matvec_t(jac, y);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 3; ++k)
                v[static_cast<size_t>(i)][k] += dv[static_cast<size_t>(3 * i + k)];
    }
    return v;
}

std::vector<Vec3> feasible_point(const ExclusivityGraph& g, RngStream& rng) {
    std::vector<std::vector<int>> nbr = neighbor_lists(g);
    QutritSpectrum flat(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<Vec3> v(static_cast<size_t>(g.n));
        for (auto& x : v) x = rng.unit_vec3();
        // flat weights make the value constant, so BCD just orthogonalizes
        bcd_stage(v, flat, g, nbr, 1.0, 60, 1e-14);
        bcd_stage(v, flat, g, nbr, 100.0, 60, 1e-14);
        v = restore_feasible(v, g);
        if (max_edge_residual(v, g) < 1e-10 && max_unit_deviation(v) < 1e-10) return v;
    }
    throw infeasible_error("feasible_point: no random draw reached the constraint manifold");
}

OptimizationResult optimize_measurements(const QutritSpectrum& rho, const ExclusivityGraph& g,
                                         const OptimizerConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<int>> nbr = neighbor_lists(g);
    bool have_best = false;
    double best_val = 0.0;
    int best_idx = -1;
    std::vector<Vec3> best_v;
    double best_res = 0.0;
    for (int k = 0; k < cfg.starts; ++k) {
        RngStream rng(cfg.seed, static_cast<std::uint64_t>(k));
        std::vector<Vec3> v(static_cast<size_t>(g.n));
        for (auto& x : v) x = rng.unit_vec3();
        for (double mu : cfg.penalty_schedule) {
            gradient_stage(v, rho, g, mu, cfg.max_iters, cfg.objective_tol);
            bcd_stage(v, rho, g, nbr, mu, 80, 1e-13);
        }
        kkt_polish(v, rho, g);
        v = restore_feasible(v, g);
        double res = max_edge_residual(v, g);
        double unit = max_unit_deviation(v);
        if (res > cfg.feasibility_tol || unit > 1e-10) continue;
        double val = objective(v, rho);
        // highest value wins; ties within objective_tol keep the lowest index
        if (!have_best || val > best_val + cfg.objective_tol) {
            have_best = true;
            best_val = val;
            best_idx = k;
            best_v = v;
            best_res = res;
        }
    }
    if (!have_best)
        throw infeasible_error(
            "optimize_measurements: no start reached feasibility (graph over-constrained for "
            "dimension 3?)");
    OptimizationResult out{make_measurement_set(g, std::move(best_v)), best_val, best_res,
                           best_idx};
    return out;
}

double pure_state_optimum(const ExclusivityGraph& g, const OptimizerConfig& cfg) {
    return optimize_measurements(QutritSpectrum(1.0, 0.0, 0.0), g, cfg).value;
}

namespace {

McmsPoint mcms_extremize(const ExclusivityGraph& g, double s, const OptimizerConfig& cfg,
                         bool upper) {
    double sgn = upper ? 1.0 : -1.0;
    auto value_at = [&](double t) {
        QutritSpectrum lam = iso_entropy_family(s, t);
        return optimize_measurements(lam, g, cfg).value;
    };
    if (s <= 1e-12 || s >= 1.0 - 1e-12) {
        // family collapses to a single spectrum
        return {iso_entropy_family(s, 0.0), value_at(0.0)};
    }
    // dense scan
    const int kDense = 181;
    double best_t = 0.0, best_v = -1e300;
    std::vector<double> vals(kDense);
    for (int i = 0; i < kDense; ++i) {
        double t = static_cast<double>(i) / (kDense - 1);
        vals[static_cast<size_t>(i)] = value_at(t);
        if (sgn * vals[static_cast<size_t>(i)] > best_v) {
            best_v = sgn * vals[static_cast<size_t>(i)];
            best_t = t;
        }
    }
    // golden-section refine around the dense winner
    int ki = static_cast<int>(std::lround(best_t * (kDense - 1)));
    double a = std::max(0, ki - 1) / static_cast<double>(kDense - 1);
    double b = std::min(kDense - 1, ki + 1) / static_cast<double>(kDense - 1);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = sgn * value_at(c), fd = sgn * value_at(d);
    while (b - a > 1e-10) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = sgn * value_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = sgn * value_at(d);
        }
        if (fc > best_v) { best_v = fc; best_t = c; }
        if (fd > best_v) { best_v = fd; best_t = d; }
    }
    return {iso_entropy_family(s, best_t), sgn * best_v};
}

}  // namespace

McmsPoint mcms_upper(const ExclusivityGraph& g, double s, const OptimizerConfig& cfg) {
    return mcms_extremize(g, s, cfg, true);
}

McmsPoint mcms_lower(const ExclusivityGraph& g, double s, const OptimizerConfig& cfg) {
    return mcms_extremize(g, s, cfg, false);
}

std::vector<CurvePoint> trace_arc_numeric(ArcId arc, const ExclusivityGraph& g, int samples,
                                          const OptimizerConfig& cfg) {
    if (samples < 2) throw std::invalid_argument("trace_arc_numeric: samples must be >= 2");
    auto [lo, hi] = arc_domain(arc);
    std::vector<CurvePoint> pts;
    pts.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        double s = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        QutritSpectrum lam = arc_state(arc, s);
        pts.push_back({s, optimize_measurements(lam, g, cfg).value});
    }
    return pts;
}

}  // namespace qctx
