#include "qctx/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>

namespace qctx {

StochasticWitness make_stochastic_witness(MatrixN w, double tol) {
    if (w.rows != w.cols) throw std::invalid_argument("StochasticWitness: matrix not square");
    int n = w.rows;
    for (int i = 0; i < n; ++i) {
        double rs = 0.0, cs = 0.0;
        for (int j = 0; j < n; ++j) {
            if (w.at(i, j) < -tol)
                throw std::invalid_argument("StochasticWitness: negative entry");
            rs += w.at(i, j);
            cs += w.at(j, i);
        }
        if (std::abs(rs - 1.0) > tol || std::abs(cs - 1.0) > tol)
            throw std::invalid_argument("StochasticWitness: row/column sum differs from 1");
    }
    return StochasticWitness{std::move(w)};
}

TraceCheck trace_inequality_check(const std::vector<double>& a, const std::vector<double>& b,
                                  const MatrixN& u) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n || u.rows != n || u.cols != n)
        throw std::invalid_argument("trace_inequality_check: size mismatch");
    for (int i = 0; i + 1 < n; ++i) {
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i + 1)] - 1e-12 ||
            b[static_cast<size_t>(i)] < b[static_cast<size_t>(i + 1)] - 1e-12)
            throw std::invalid_argument("trace_inequality_check: diagonals must be descending");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += u.at(k, i) * u.at(k, j);
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw std::invalid_argument("trace_inequality_check: u is not orthogonal");
        }
    // lhs by explicit matrix products: B = u diag(b) u^T, then Tr[diag(a) B]
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
        double bii = 0.0;
        for (int k = 0; k < n; ++k) bii += u.at(i, k) * b[static_cast<size_t>(k)] * u.at(i, k);
        lhs += a[static_cast<size_t>(i)] * bii;
    }
    double rhs = 0.0;
    for (int i = 0; i < n; ++i) rhs += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
    MatrixN w(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w.at(i, j) = u.at(i, j) * u.at(i, j);
    return TraceCheck{lhs, rhs, make_stochastic_witness(std::move(w), 1e-10)};
}

MatrixN random_orthogonal(int n, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("random_orthogonal: n must be >= 1");
    MatrixN q(n, n);
    for (int col = 0; col < n; ++col) {
        std::vector<double> v(static_cast<size_t>(n));
        for (;;) {
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = rng.gaussian();
            // modified Gram-Schmidt against previous columns
            for (int k = 0; k < col; ++k) {
                double c = 0.0;
                for (int i = 0; i < n; ++i) c += q.at(i, k) * v[static_cast<size_t>(i)];
                for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] -= c * q.at(i, k);
            }
            double nn = 0.0;
            for (double x : v) nn += x * x;
            if (nn > 1e-16) {
                nn = std::sqrt(nn);
                for (int i = 0; i < n; ++i) q.at(i, col) = v[static_cast<size_t>(i)] / nn;
                break;
            }
        }
    }
    return q;
}

LemmaSuiteResult trace_inequality_suite(long trials, std::uint64_t seed,
                                        const std::vector<int>& dims) {
    if (trials < 1) throw std::invalid_argument("trace_inequality_suite: trials must be >= 1");
    if (dims.empty()) throw std::invalid_argument("trace_inequality_suite: dims empty");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("trace_inequality_suite: dims must be positive");
    LemmaSuiteResult out;
    for (long t = 0; t < trials; ++t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        int n = dims[static_cast<size_t>(t % static_cast<long>(dims.size()))];
        std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
        for (double& x : a) x = rng.gaussian();
        for (double& x : b) x = rng.gaussian();
        std::sort(a.rbegin(), a.rend());
        std::sort(b.rbegin(), b.rend());
        MatrixN u = random_orthogonal(n, rng);
        TraceCheck chk = trace_inequality_check(a, b, u);
        out.max_violation = std::max(out.max_violation, chk.lhs - chk.rhs);
        double wdev = 0.0;
        for (int i = 0; i < n; ++i) {
            double rs = 0.0, cs = 0.0;
            for (int j = 0; j < n; ++j) {
                rs += chk.witness.w.at(i, j);
                cs += chk.witness.w.at(j, i);
            }
            wdev = std::max({wdev, std::abs(rs - 1.0), std::abs(cs - 1.0)});
        }
        out.max_witness_dev = std::max(out.max_witness_dev, wdev);
        double awb = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                awb += a[static_cast<size_t>(i)] * chk.witness.w.at(i, j) * b[static_cast<size_t>(j)];
        out.max_identity_dev = std::max(out.max_identity_dev, std::abs(chk.lhs - awb));
        ++out.trials;
    }
    return out;
}

PermutationCheck permutation_maximum_check(const std::vector<double>& a,
                                           const std::vector<double>& b) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("permutation_maximum_check: size mismatch");
    if (n < 1 || n > 8)
        throw std::invalid_argument("permutation_maximum_check: n outside 1..8 enumeration guard");
    for (int i = 0; i + 1 < n; ++i)
        if (a[static_cast<size_t>(i)] < a[static_cast<size_t>(i + 1)] - 1e-12 ||
            b[static_cast<size_t>(i)] < b[static_cast<size_t>(i + 1)] - 1e-12)
            throw std::invalid_argument("permutation_maximum_check: inputs must be descending");
    std::vector<int> p(static_cast<size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    double identity = 0.0;
    for (int i = 0; i < n; ++i) identity += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
    double best = -1e300;
    do {
        double v = 0.0;
        for (int i = 0; i < n; ++i)
            v += a[static_cast<size_t>(i)] * b[static_cast<size_t>(p[static_cast<size_t>(i)])];
        best = std::max(best, v);
    } while (std::next_permutation(p.begin(), p.end()));
    return PermutationCheck{best <= identity + 1e-12, identity, best};
}

namespace {

Mat3 overall_of(const std::vector<Vec3>& v) {
    Mat3 m = mat3_zero();
    for (const Vec3& x : v) add_outer(m, x, 1.0);
    return m;
}

SpectralPoint spectrum_point(const std::vector<Vec3>& v) {
    SymEigen3 e = sym_eigen3(overall_of(v));
    return SpectralPoint{e.w[0], e.w[1], e.w[2]};
}

bool same_point(const SpectralPoint& a, const SpectralPoint& b) {
    return std::abs(a.m1 - b.m1) <= 1e-6 && std::abs(a.m2 - b.m2) <= 1e-6 &&
           std::abs(a.m3 - b.m3) <= 1e-6;
}

}  // namespace

SpectralCurve spectral_curve(const ExclusivityGraph& g, const std::vector<QutritSpectrum>& family,
                             const OptimizerConfig& cfg) {
    SpectralCurve out;
    for (size_t idx = 0; idx < family.size(); ++idx) {
        QutritSpectrum rho = family[idx];
        if (rho.l1 - rho.l3 <= 1e-12) {
            // flat spectrum: every feasible set is optimal; report the limit
            // along the lambda2 = lambda3 ray instead (s -> 1 in the family).
            // The recorded point is the found SET's spectrum, which for this
            // ray is tilt-independent, so the tilt only needs to clear the
            // optimizer's resolution.
            double x = 1e-2;
            rho = QutritSpectrum((1.0 + 2.0 * x) / 3.0, (1.0 - x) / 3.0, (1.0 - x) / 3.0);
        }
        OptimizationResult r = optimize_measurements(rho, g, cfg);
        SpectralPoint p = spectrum_point(r.best_set.vectors);
        bool dup = false;
        for (const SpectralPoint& q : out.points)
            if (same_point(p, q)) { dup = true; break; }
        if (!dup) {
            out.points.push_back(p);
            out.source_index.push_back(static_cast<int>(idx));
        }
    }
    return out;
}

namespace {

// descend h = (m1 - target)^2 + mu * sum_edges (v_i . v_j)^2 on the product
// of unit spheres
void target_descent(std::vector<Vec3>& v, double target, const ExclusivityGraph& g,
                    const std::vector<std::vector<int>>& nbr, double mu, int iters) {
    auto hval = [&](const std::vector<Vec3>& vv) {
        SymEigen3 e = sym_eigen3(overall_of(vv));
        double pen = 0.0;
        for (auto [i, j] : g.edges) {
            double ip = dot(vv[static_cast<size_t>(i - 1)], vv[static_cast<size_t>(j - 1)]);
            pen += ip * ip;
        }
        double d = e.w[0] - target;
        return d * d + mu * pen;
    };
    double h = hval(v);
    double step = 0.05;
    for (int it = 0; it < iters; ++it) {
        SymEigen3 e = sym_eigen3(overall_of(v));
        Vec3 u1 = {e.v(0, 0), e.v(1, 0), e.v(2, 0)};
        double d = e.w[0] - target;
        // dm1/dv_i = 2 (v_i . u1) u1
        std::vector<Vec3> grad(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            double c = 4.0 * d * dot(v[i], u1);
            grad[i] = {c * u1[0], c * u1[1], c * u1[2]};
        }
        for (size_t i = 0; i < v.size(); ++i)
            for (int j : nbr[i]) {
                double ip = dot(v[i], v[static_cast<size_t>(j)]);
                for (int k = 0; k < 3; ++k)
                    grad[i][k] += 2.0 * mu * ip * v[static_cast<size_t>(j)][k];
            }
        double gn2 = 0.0;
        for (size_t i = 0; i < v.size(); ++i) {
            double c = dot(grad[i], v[i]);
            for (int k = 0; k < 3; ++k) grad[i][k] -= c * v[i][k];
            gn2 += dot(grad[i], grad[i]);
        }
        if (gn2 < 1e-26) break;
        std::vector<Vec3> w(v.size());
        bool moved = false;
        double hn = h;
        while (step >= 1e-16) {
            for (size_t i = 0; i < v.size(); ++i) {
                Vec3 y = {v[i][0] - step * grad[i][0], v[i][1] - step * grad[i][1],
                          v[i][2] - step * grad[i][2]};
                w[i] = normalized(y);
            }
            hn = hval(w);
            if (hn <= h - 1e-4 * step * gn2) { moved = true; break; }
            step *= 0.5;
        }
        if (!moved) break;
        v.swap(w);
        h = hn;
        step *= 1.3;
        if (h < 1e-22) break;
    }
}

struct AttainResult {
    SpectralPoint point;
    double err;
};

AttainResult attain_target(std::vector<Vec3>& v, double target, const ExclusivityGraph& g,
                           const std::vector<std::vector<int>>& nbr) {
    std::vector<Vec3> best_v = v;
    SpectralPoint best_p = spectrum_point(v);
    double best_err = std::abs(best_p.m1 - target);
    for (int round = 0; round < 8 && best_err >= 1e-8; ++round) {
        if (round > 0) {
            // the descent stalls when warm-started at an m1 extremum of the
            // feasible manifold (the target gradient vanishes along feasible
            // directions there); a small reprojected random step breaks that
            RngStream kick(std::bit_cast<std::uint64_t>(target),
                           static_cast<std::uint64_t>(round));
            double amp = 0.03 * round;
            for (Vec3& x : v)
                for (double& c : x) c += amp * kick.gaussian();
            v = restore_feasible(v, g);
        }
        for (double mu : {1e2, 1e3, 1e4}) target_descent(v, target, g, nbr, mu, 400);
        v = restore_feasible(v, g);
        SpectralPoint p = spectrum_point(v);
        double err = std::abs(p.m1 - target);
        if (err < best_err) {
            best_err = err;
            best_p = p;
            best_v = v;
        } else {
            v = best_v;
        }
    }
    v = best_v;
    return {best_p, best_err};
}

// Alternating projections toward M = c I (tighten by M^{-1/2}, reproject to
// the constraints), then a combined Gauss-Newton finish. Returns the tight
// frame or nullopt when the graph admits none (residual plateaus above 1e-3).
std::optional<std::vector<Vec3>> tight_frame(const ExclusivityGraph& g,
                                             const OptimizerConfig& cfg) {
    int n = g.n;
    int ne = static_cast<int>(g.edges.size());
    double c = n / 3.0;
    auto tight_dist = [&](const std::vector<Vec3>& v) {
        Mat3 m = overall_of(v);
        double s = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double d = m(i, j) - (i == j ? c : 0.0);
                s += d * d;
            }
        return std::sqrt(s);
    };
    std::optional<std::vector<Vec3>> best;
    double best_d = 1e300;
    for (int attempt = 0; attempt < 4; ++attempt) {
        RngStream rng(cfg.seed, 10000 + static_cast<std::uint64_t>(attempt));
        std::vector<Vec3> v;
        try {
            v = feasible_point(g, rng);
        } catch (const infeasible_error&) {
            continue;
        }
        for (int round = 0; round < 300; ++round) {
            Mat3 m = overall_of(v);
            SymEigen3 e = sym_eigen3(m);
            // M^{-1/2} scaled by sqrt(c)
            Mat3 half = mat3_zero();
            for (int k = 0; k < 3; ++k) {
                double w = std::max(e.w[k], 1e-12);
                Vec3 col = {e.v(0, k), e.v(1, k), e.v(2, k)};
                add_outer(half, col, std::sqrt(c / w));
            }
            for (Vec3& x : v) x = normalized(mat3_mul(half, x));
            v = restore_feasible(v, g, 8);
            double d = tight_dist(v);
            if (d < best_d) {
                best_d = d;
                best = v;
            }
            if (d < 1e-13) break;
        }
    }
    if (!best || best_d > 1e-3) return std::nullopt;
    // Gauss-Newton on {unit norms, edge orthogonality, M - cI}
    std::vector<Vec3>& v = *best;
    int nc = n + ne + 6;
    for (int it = 0; it < 60; ++it) {
        std::vector<double> r(static_cast<size_t>(nc), 0.0);
        for (int i = 0; i < n; ++i)
            r[static_cast<size_t>(i)] = dot(v[static_cast<size_t>(i)], v[static_cast<size_t>(i)]) - 1.0;
        for (int e = 0; e < ne; ++e) {
            auto [i, j] = g.edges[static_cast<size_t>(e)];
            r[static_cast<size_t>(n + e)] =
                dot(v[static_cast<size_t>(i - 1)], v[static_cast<size_t>(j - 1)]);
        }
        Mat3 m = overall_of(v);
        int row = n + ne;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                r[static_cast<size_t>(row++)] = m(a, b) - (a == b ? c : 0.0);
        double rmax = 0.0;
        for (double x : r) rmax = std::max(rmax, std::abs(x));
        if (rmax < 1e-13) break;
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
        row = n + ne;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b) {
                // d M_ab / d v_i = e_a v_i[b] + e_b v_i[a]
                for (int i = 0; i < n; ++i) {
                    if (a == b) {
                        jac.at(row, 3 * i + a) = 2.0 * v[static_cast<size_t>(i)][a];
                    } else {
                        jac.at(row, 3 * i + a) = v[static_cast<size_t>(i)][b];
                        jac.at(row, 3 * i + b) = v[static_cast<size_t>(i)][a];
                    }
                }
                ++row;
            }
        MatrixN jjt(nc, nc);
        for (int p = 0; p < nc; ++p)
            for (int q = 0; q < nc; ++q) {
                double s = 0.0;
                for (int k = 0; k < 3 * n; ++k) s += jac.at(p, k) * jac.at(q, k);
                jjt.at(p, q) = s;
            }
        for (double& x : r) x = -x;
        std::vector<double> y;
        try {
            y = solve_spd(jjt, r, 1e-13);
        } catch (const std::runtime_error&) {
            break;
        }
        std::vector<double> dv = matvec_t(jac, y);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 3; ++k)
                v[static_cast<size_t>(i)][k] += dv[static_cast<size_t>(3 * i + k)];
    }
    if (tight_dist(v) > 1e-10 || max_edge_residual(v, g) > 1e-10 || max_unit_deviation(v) > 1e-10)
        return std::nullopt;
    return best;
}

}  // namespace

std::vector<SpectralPoint> feasible_spectrum_trace(const ExclusivityGraph& g, int samples,
                                                   const OptimizerConfig& cfg) {
    if (samples < 2) throw std::invalid_argument("feasible_spectrum_trace: samples must be >= 2");
    std::vector<std::vector<int>> nbr = neighbor_lists(g);
    OptimizationResult top = optimize_measurements(QutritSpectrum(1, 0, 0), g, cfg);
    std::vector<Vec3> vhi = top.best_set.vectors;
    SpectralPoint phi = spectrum_point(vhi);
    std::vector<SpectralPoint> pts;
    std::optional<std::vector<Vec3>> lo = tight_frame(g, cfg);
    if (lo) {
        // march up from the tight frame toward the pure-state-optimal set
        SpectralPoint plo = spectrum_point(*lo);
        pts.push_back(plo);
        std::vector<Vec3> v = *lo;
        for (int i = 1; i + 1 < samples; ++i) {
            double target =
                plo.m1 + (phi.m1 - plo.m1) * static_cast<double>(i) / (samples - 1);
            AttainResult a = attain_target(v, target, g, nbr);
            pts.push_back(a.point);
        }
        pts.push_back(phi);
    } else {
        // No tight frame. Descending from the top set directly stalls: the
        // top is an m1 maximum of the feasible manifold, so the target
        // gradient vanishes along feasible directions there. Instead use the
        // rank-2 state sweep (a, 1-a, 0): its per-state optimal sets are the
        // support points of the attainable (m1, m2) region, and their m1
        // falls continuously as a drops from 1 to 1/2. Bisect on a for each
        // requested level, polish onto the exact level, and only below the
        // sweep's lower end fall back to a micro-stepped walk plus a
        // boundary bisection.
        auto set_at = [&](double a) {
            OptimizationResult r = optimize_measurements(QutritSpectrum(a, 1.0 - a, 0.0), g, cfg);
            return r.best_set.vectors;
        };
        pts.push_back(phi);
        std::vector<Vec3> vlo = set_at(0.5);
        double sweep_lo = spectrum_point(vlo).m1;
        std::vector<Vec3> v = vlo;
        double floor = g.n / 3.0;
        double cur = sweep_lo;
        bool blocked = false;
        for (int i = 1; i < samples && !blocked; ++i) {
            double target = phi.m1 + (floor - phi.m1) * static_cast<double>(i) / (samples - 1);
            if (target >= sweep_lo - 1e-9) {
                double alo = 0.5, ahi = 1.0;
                std::vector<Vec3> vbest = vlo;
                double mbest = sweep_lo;
                for (int it = 0; it < 30 && std::abs(mbest - target) > 1e-8; ++it) {
                    double amid = 0.5 * (alo + ahi);
                    std::vector<Vec3> vm = set_at(amid);
                    double m = spectrum_point(vm).m1;
                    if (std::abs(m - target) < std::abs(mbest - target)) {
                        vbest = vm;
                        mbest = m;
                    }
                    (m > target ? ahi : alo) = amid;
                }
                AttainResult a = attain_target(vbest, target, g, nbr);
                pts.push_back(a.point);
                continue;
            }
            // below the sweep: small m1 decrements, halved twice on a miss
            // before the level is declared unreachable
            double step = 0.02;
            while (cur - target > 1e-9) {
                double sub = std::max(target, cur - step);
                AttainResult a = attain_target(v, sub, g, nbr);
                if (a.err > 1e-6) {
                    if (step > 2.5e-3) {
                        step *= 0.5;
                        continue;
                    }
                    blocked = true;
                    break;
                }
                cur = a.point.m1;
            }
            if (!blocked) pts.push_back(spectrum_point(v));
        }
        if (blocked) {
            double lo_t = std::max(floor, cur - 0.02), hi_t = cur;
            for (int it = 0; it < 20 && hi_t - lo_t > 1e-9; ++it) {
                double mid = 0.5 * (lo_t + hi_t);
                std::vector<Vec3> vt = v;
                AttainResult a = attain_target(vt, mid, g, nbr);
                if (a.err < 1e-6) {
                    hi_t = a.point.m1;
                    v = vt;
                } else {
                    lo_t = mid;
                }
            }
            pts.push_back(spectrum_point(v));
        }
    }
    std::sort(pts.begin(), pts.end(),
              [](const SpectralPoint& a, const SpectralPoint& b) { return a.m1 < b.m1; });
    std::vector<SpectralPoint> dedup;
    for (const SpectralPoint& p : pts) {
        if (!dedup.empty() && same_point(dedup.back(), p)) continue;
        dedup.push_back(p);
    }
    return dedup;
}

SlopeReport curve_slope_analysis(const std::vector<SpectralPoint>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("curve_slope_analysis: need at least 3 points");
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1].m1 < points[i].m1 - 1e-12)
            throw std::invalid_argument("curve_slope_analysis: points must be sorted by m1");
    SlopeReport rep;
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        double d1 = points[i + 1].m1 - points[i].m1;
        if (d1 < 1e-9) continue;  // duplicates should be collapsed upstream
        double s2 = (points[i + 1].m2 - points[i].m2) / d1;
        double s3 = (points[i + 1].m3 - points[i].m3) / d1;
        rep.dm2.push_back(s2);
        rep.dm3.push_back(s3);
        rep.max_identity_dev = std::max(rep.max_identity_dev, std::abs(s3 + 1.0 + s2));
    }
    if (rep.dm2.empty())
        throw std::invalid_argument("curve_slope_analysis: no pair with distinct m1");
    rep.min_dm2 = *std::min_element(rep.dm2.begin(), rep.dm2.end());
    rep.max_dm2 = *std::max_element(rep.dm2.begin(), rep.dm2.end());
    rep.min_dm3 = *std::min_element(rep.dm3.begin(), rep.dm3.end());
    rep.max_dm3 = *std::max_element(rep.dm3.begin(), rep.dm3.end());
    rep.dm2_all_below_minus_one = rep.max_dm2 < -1.0;
    rep.dm2_all_within_1e4 = std::max(std::abs(rep.min_dm2), std::abs(rep.max_dm2)) <= 1e-4;
    rep.dm3_all_positive = rep.min_dm3 > 0.0;
    rep.dm3_all_nonpositive = rep.max_dm3 <= 0.0;
    return rep;
}

double optimal_slope_condition(ArcId arc, double s) {
    switch (arc) {
        case ArcId::AC: {
            auto [lo, hi] = arc_domain(ArcId::AC);
            if (s < lo - 1e-12 || s > hi + 1e-12)
                throw std::domain_error("optimal_slope_condition: s outside AC interval");
            double x = std::sqrt(std::max(0.0, 1.0 - 4.0 * s / 3.0));
            return -(1.0 + x) / (1.0 - x);  // -inf at s = 0 (x = 1)
        }
        case ArcId::CD:
            if (s < -1e-12 || s > 1.0 + 1e-12)
                throw std::domain_error("optimal_slope_condition: s outside [0,1]");
            return -1.0;
        case ArcId::AD:
            if (s < -1e-12 || s > 1.0 + 1e-12)
                throw std::domain_error("optimal_slope_condition: s outside [0,1]");
            return 1.0;
        default:
            throw std::invalid_argument(
                "optimal_slope_condition: only the KCBS arcs AC, CD, AD are classified");
    }
}

std::vector<SurfaceSample> diagonal_violation_surface(const MeasurementSet& ms, int grid) {
    if (grid < 2) throw std::invalid_argument("diagonal_violation_surface: grid must be >= 2");
    std::vector<SurfaceSample> out;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j + i < grid; ++j) {
            double l1 = static_cast<double>(i) / (grid - 1);
            double l2 = static_cast<double>(j) / (grid - 1);
            double l3 = 1.0 - l1 - l2;
            if (l3 < 0.0) l3 = 0.0;  // guard the i+j = grid-1 diagonal roundoff
            DiagonalWeights w(l1, l2, l3);
            out.push_back({l1, l2, contextuality_value(w, ms)});
        }
    return out;
}

}  // namespace qctx
