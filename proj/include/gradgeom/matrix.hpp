#pragma once

#include <cstddef>
#include <vector>

namespace gradgeom {

// Dense row-major matrix of doubles. Desk-scale only; no views, no BLAS.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows*cols, row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n);
};

Matrix transpose(const Matrix& m);
Matrix matmul(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);

struct QrResult {
    Matrix q;  // p x q, column-orthonormal
    Matrix r;  // q x q, upper triangular, nonnegative diagonal
};

// Householder QR of a full-column-rank p x q matrix (p >= q).
// Throws domain_error naming the deficient column when |R_ii| < 1e-10*||M||.
QrResult householder_qr(const Matrix& m);

struct SvdResult {
    Matrix u;                   // p x s
    std::vector<double> sigma;  // s, descending, nonnegative
    Matrix v;                   // q x s
};

// Thin SVD via one-sided Jacobi rotations (convergence threshold 1e-14 on
// relative off-diagonal mass). s = min(p, q). Column-sign convention: first
// entry of each U column with |entry| > 0 is nonnegative.
SvdResult thin_svd(const Matrix& m);

// Least-norm solution of M x = b via SVD pseudoinverse; singular values below
// rcond * sigma_max are treated as zero.
std::vector<double> pinv_solve(const SvdResult& svd, const std::vector<double>& b,
                               double rcond = 1e-10);

}  // namespace gradgeom
