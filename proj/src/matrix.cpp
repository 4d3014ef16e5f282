#include "gradgeom/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gradgeom/errors.hpp"

namespace gradgeom {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw domain_error("matmul: inner dimensions disagree");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    if (a.cols != x.size()) throw domain_error("matvec: dimension mismatch");
    std::vector<double> y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data) s += x * x;
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data) s = std::max(s, std::fabs(x));
    return s;
}

QrResult householder_qr(const Matrix& m) {
    const std::size_t p = m.rows, q = m.cols;
    if (p < q) throw domain_error("householder_qr: requires rows >= cols");
    const double scale = frobenius_norm(m);

    Matrix a = m;  // reduced in place to R
    // Householder vectors kept to apply Q afterwards
    std::vector<std::vector<double>> hh(q);

    for (std::size_t k = 0; k < q; ++k) {
        double nrm = 0.0;
        for (std::size_t i = k; i < p; ++i) nrm += a(i, k) * a(i, k);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-10 * (scale > 0.0 ? scale : 1.0))
            throw domain_error("householder_qr: rank-deficient input at column " +
                               std::to_string(k));
        const double alpha = (a(k, k) >= 0.0) ? -nrm : nrm;
        std::vector<double> v(p - k, 0.0);
        v[0] = a(k, k) - alpha;
        for (std::size_t i = k + 1; i < p; ++i) v[i - k] = a(i, k);
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 > 0.0) {
            for (std::size_t j = k; j < q; ++j) {
                double dot = 0.0;
                for (std::size_t i = k; i < p; ++i) dot += v[i - k] * a(i, j);
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < p; ++i) a(i, j) -= f * v[i - k];
            }
        }
        a(k, k) = alpha;
        for (std::size_t i = k + 1; i < p; ++i) a(i, k) = 0.0;
        hh[k] = std::move(v);
    }

    // assemble thin Q by applying reflections to the first q identity columns
    Matrix full(p, q);
    for (std::size_t j = 0; j < q; ++j) full(j, j) = 1.0;
    for (std::size_t k = q; k-- > 0;) {
        const auto& v = hh[k];
        double vnorm2 = 0.0;
        for (double x : v) vnorm2 += x * x;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = 0; j < q; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < p; ++i) dot += v[i - k] * full(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < p; ++i) full(i, j) -= f * v[i - k];
        }
    }

    QrResult out;
    out.q = std::move(full);
    out.r = Matrix(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i; j < q; ++j) out.r(i, j) = a(i, j);

    // sign convention: nonnegative R diagonal
    for (std::size_t i = 0; i < q; ++i) {
        if (out.r(i, i) < 0.0) {
            for (std::size_t j = i; j < q; ++j) out.r(i, j) = -out.r(i, j);
            for (std::size_t r = 0; r < p; ++r) out.q(r, i) = -out.q(r, i);
        }
    }
    return out;
}

namespace {

// one-sided Jacobi on a p x q matrix with p >= q; returns U (p x q),
// sigma (q), V (q x q)
SvdResult jacobi_svd_tall(const Matrix& m) {
    const std::size_t p = m.rows, q = m.cols;
    Matrix a = m;
    Matrix v = Matrix::identity(q);

    const double fnorm = frobenius_norm(m);
    const double tol = 1e-14;
    const int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            for (std::size_t j = i + 1; j < q; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (std::size_t r = 0; r < p; ++r) {
                    aii += a(r, i) * a(r, i);
                    ajj += a(r, j) * a(r, j);
                    aij += a(r, i) * a(r, j);
                }
                off = std::max(off, std::fabs(aij) / (fnorm * fnorm + 1e-300));
                if (std::fabs(aij) <= tol * std::sqrt(aii * ajj)) continue;
                const double tau = (ajj - aii) / (2.0 * aij);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t r = 0; r < p; ++r) {
                    const double x = a(r, i), y = a(r, j);
                    a(r, i) = c * x - s * y;
                    a(r, j) = s * x + c * y;
                }
                for (std::size_t r = 0; r < q; ++r) {
                    const double x = v(r, i), y = v(r, j);
                    v(r, i) = c * x - s * y;
                    v(r, j) = s * x + c * y;
                }
            }
        }
        if (off <= tol) break;
    }

    std::vector<double> sigma(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < p; ++r) s += a(r, j) * a(r, j);
        sigma[j] = std::sqrt(s);
    }

    // sort descending
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out;
    out.u = Matrix(p, q);
    out.v = Matrix(q, q);
    out.sigma.resize(q);
    for (std::size_t jj = 0; jj < q; ++jj) {
        const std::size_t src = order[jj];
        out.sigma[jj] = sigma[src];
        for (std::size_t r = 0; r < q; ++r) out.v(r, jj) = v(r, src);
        if (sigma[src] > 0.0) {
            for (std::size_t r = 0; r < p; ++r) out.u(r, jj) = a(r, src) / sigma[src];
        }
    }

    // fill U columns for zero singular values with an orthonormal completion
    for (std::size_t jj = 0; jj < q; ++jj) {
        if (out.sigma[jj] > 0.0) continue;
        for (std::size_t cand = 0; cand < p; ++cand) {
            std::vector<double> e(p, 0.0);
            e[cand] = 1.0;
            for (std::size_t k = 0; k < q; ++k) {
                if (k == jj || (out.sigma[k] == 0.0 && k > jj)) continue;
                double dot = 0.0;
                for (std::size_t r = 0; r < p; ++r) dot += e[r] * out.u(r, k);
                for (std::size_t r = 0; r < p; ++r) e[r] -= dot * out.u(r, k);
            }
            double nrm = 0.0;
            for (double x : e) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm > 0.5) {
                for (std::size_t r = 0; r < p; ++r) out.u(r, jj) = e[r] / nrm;
                break;
            }
        }
    }

    // sign convention on U columns; V follows so the product is unchanged
    for (std::size_t jj = 0; jj < q; ++jj) {
        double lead = 0.0;
        for (std::size_t r = 0; r < p; ++r) {
            if (out.u(r, jj) != 0.0) {
                lead = out.u(r, jj);
                break;
            }
        }
        if (lead < 0.0) {
            for (std::size_t r = 0; r < p; ++r) out.u(r, jj) = -out.u(r, jj);
            for (std::size_t r = 0; r < q; ++r) out.v(r, jj) = -out.v(r, jj);
        }
    }
    return out;
}

}  // namespace

SvdResult thin_svd(const Matrix& m) {
    if (m.rows == 0 || m.cols == 0) throw domain_error("thin_svd: empty matrix");
    if (m.rows * m.cols > 10'000'000)
        throw domain_error("thin_svd: matrix exceeds the 1e7-entry dense cap");
    for (double x : m.data)
        if (!std::isfinite(x)) throw domain_error("thin_svd: non-finite entry");
    if (m.rows >= m.cols) return jacobi_svd_tall(m);
    SvdResult t = jacobi_svd_tall(transpose(m));
    std::swap(t.u, t.v);
    return t;
}

std::vector<double> pinv_solve(const SvdResult& svd, const std::vector<double>& b,
                               double rcond) {
    if (svd.u.rows != b.size()) throw domain_error("pinv_solve: dimension mismatch");
    const double cut = rcond * (svd.sigma.empty() ? 0.0 : svd.sigma.front());
    std::vector<double> x(svd.v.rows, 0.0);
    for (std::size_t k = 0; k < svd.sigma.size(); ++k) {
        if (svd.sigma[k] <= cut || svd.sigma[k] == 0.0) continue;
        double dot = 0.0;
        for (std::size_t r = 0; r < b.size(); ++r) dot += svd.u(r, k) * b[r];
        const double coef = dot / svd.sigma[k];
        for (std::size_t r = 0; r < x.size(); ++r) x[r] += coef * svd.v(r, k);
    }
    return x;
}

}  // namespace gradgeom
