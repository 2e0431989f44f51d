#pragma once
// Small dense linear algebra for 3-d measurement vectors and the modest
// Newton/Gauss-Newton systems of the optimizer (at most ~50 unknowns).
// Deliberately self-contained: the 3x3 symmetric eigenproblem is the only
// nontrivial kernel and is solved by cyclic Jacobi sweeps.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace qctx {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};
    double& operator()(int i, int j) { return a[3 * i + j]; }
    double operator()(int i, int j) const { return a[3 * i + j]; }
};

Mat3 mat3_zero();
Mat3 mat3_identity();
Vec3 mat3_mul(const Mat3& m, const Vec3& v);
Mat3 mat3_mul(const Mat3& x, const Mat3& y);
Mat3 mat3_transpose(const Mat3& m);
// v * v^T rank-1 update helper
void add_outer(Mat3& m, const Vec3& v, double w);

// Eigendecomposition of a symmetric 3x3 matrix: eigenvalues descending,
// eigenvectors as matching columns of an orthogonal matrix. Deterministic
// tie handling: each eigenvector's largest-magnitude component is made
// positive, so degenerate spectra still give reproducible bases.
struct SymEigen3 {
    std::array<double, 3> w;  // descending
    Mat3 v;                   // columns are eigenvectors
};
SymEigen3 sym_eigen3(const Mat3& m);

// Dense row-major n x m matrix, just enough for the KKT/restore solves.
struct MatrixN {
    int rows = 0, cols = 0;
    std::vector<double> a;
    MatrixN() = default;
    MatrixN(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Solve (A + ridge*I) x = b for symmetric positive definite A, in place of
// pivoted factorizations; A comes from J J^T or J^T J so the ridge keeps the
// Cholesky well posed. Throws std::runtime_error if the factorization breaks
// down anyway.
std::vector<double> solve_spd(MatrixN a, std::vector<double> b, double ridge);

// y = A x and y = A^T x for MatrixN.
std::vector<double> matvec(const MatrixN& a, const std::vector<double>& x);
std::vector<double> matvec_t(const MatrixN& a, const std::vector<double>& x);

// Deterministic per-task RNG stream: (seed, stream) pairs give independent
// sequences, so multistart index k always sees the same draws no matter how
// the starts are scheduled.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream);
    double uniform();     // [0, 1)
    double gaussian();    // standard normal, Box-Muller with cached spare
    Vec3 unit_vec3();     // uniform on the sphere
  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qctx
