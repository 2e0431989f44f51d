#include "qctx/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace qctx {

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {a[0] / n, a[1] / n, a[2] / n};
}

Mat3 mat3_zero() { return Mat3{}; }

Mat3 mat3_identity() {
    Mat3 m{};
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Vec3 mat3_mul(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        r[i] = m(i, 0) * v[0] + m(i, 1) * v[1] + m(i, 2) * v[2];
    return r;
}

Mat3 mat3_mul(const Mat3& x, const Mat3& y) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
            r(i, j) = s;
        }
    return r;
}

Mat3 mat3_transpose(const Mat3& m) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

void add_outer(Mat3& m, const Vec3& v, double w) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) += w * v[i] * v[j];
}

SymEigen3 sym_eigen3(const Mat3& m) {
    // Cyclic Jacobi on the symmetrized copy; a handful of sweeps reaches
    // machine precision for 3x3.
    Mat3 a = m;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double s = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = a(j, i) = s;
        }
    Mat3 v = mat3_identity();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        double scale = std::abs(a(0, 0)) + std::abs(a(1, 1)) + std::abs(a(2, 2));
        if (off <= 1e-15 * (scale + 1e-300)) break;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                double apq = a(p, q);
                if (apq == 0.0) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    SymEigen3 out;
    std::array<int, 3> idx = {0, 1, 2};
    std::array<double, 3> w = {a(0, 0), a(1, 1), a(2, 2)};
    // descending selection sort (stable for our sizes)
    for (int i = 0; i < 2; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (w[idx[j]] > w[idx[i]]) std::swap(idx[i], idx[j]);
    for (int c = 0; c < 3; ++c) {
        out.w[c] = w[idx[c]];
        // sign convention: largest-|component| entry positive
        int imax = 0;
        double amax = 0.0;
        for (int r = 0; r < 3; ++r)
            if (std::abs(v(r, idx[c])) > amax) { amax = std::abs(v(r, idx[c])); imax = r; }
        double sgn = v(imax, idx[c]) < 0.0 ? -1.0 : 1.0;
        for (int r = 0; r < 3; ++r) out.v(r, c) = sgn * v(r, idx[c]);
    }
    return out;
}

std::vector<double> solve_spd(MatrixN a, std::vector<double> b, double ridge) {
    if (a.rows != a.cols || static_cast<int>(b.size()) != a.rows)
        throw std::invalid_argument("solve_spd: shape mismatch");
    int n = a.rows;
    for (int i = 0; i < n; ++i) a.at(i, i) += ridge;
    // in-place Cholesky a = L L^T (lower)
    for (int j = 0; j < n; ++j) {
        double d = a.at(j, j);
        for (int k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
        if (d <= 0.0) throw std::runtime_error("solve_spd: matrix not positive definite");
        d = std::sqrt(d);
        a.at(j, j) = d;
        for (int i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (int k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = s / d;
        }
    }
    // forward substitution L y = b
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a.at(i, k) * b[k];
        b[i] = s / a.at(i, i);
    }
    // back substitution L^T x = y
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a.at(k, i) * b[k];
        b[i] = s / a.at(i, i);
    }
    return b;
}

std::vector<double> matvec(const MatrixN& a, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != a.cols)
        throw std::invalid_argument("matvec: shape mismatch");
    std::vector<double> y(a.rows, 0.0);
    for (int i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols; ++j) s += a.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_t(const MatrixN& a, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != a.rows)
        throw std::invalid_argument("matvec_t: shape mismatch");
    std::vector<double> y(a.cols, 0.0);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) y[j] += a.at(i, j) * x[i];
    return y;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
}

double RngStream::uniform() {
    // 53-bit mantissa; avoids distribution-object portability quirks
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Vec3 RngStream::unit_vec3() {
    for (;;) {
        Vec3 v = {gaussian(), gaussian(), gaussian()};
        double n = norm(v);
        if (n > 1e-12) return {v[0] / n, v[1] / n, v[2] / n};
    }
}

}  // namespace qctx
