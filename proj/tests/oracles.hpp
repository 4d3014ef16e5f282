// Independent test oracles. Everything here deliberately avoids the library's
// own decomposition code paths: eigenvalues come from a two-sided cyclic
// Jacobi sweep on the Gram matrix, derivatives from central differences.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gradgeom/matrix.hpp"
#include "gradgeom/model.hpp"

namespace oracles {

// Eigenvalues of a symmetric matrix by classic two-sided Jacobi rotations,
// returned descending. Independent of gradgeom::thin_svd (one-sided, on the
// rectangular factor).
inline std::vector<double> symmetric_eigenvalues(gradgeom::Matrix a) {
    const std::size_t n = a.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

// Singular values of any matrix through the Gram-matrix eigenvalues.
inline std::vector<double> singular_values(const gradgeom::Matrix& m) {
    using gradgeom::Matrix;
    const Matrix g = m.rows >= m.cols ? matmul(transpose(m), m)
                                      : matmul(m, transpose(m));
    auto ev = symmetric_eigenvalues(g);
    for (auto& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

// Central-difference gradient of a scalar function of a vector.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Central-difference directional derivative of a vector-valued function.
inline std::vector<double> fd_jvp(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x, const std::vector<double>& v, double h = 1e-6) {
    std::vector<double> xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] += h * v[i];
        xm[i] -= h * v[i];
    }
    const auto fp = f(xp), fm = f(xm);
    std::vector<double> out(fp.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (fp[i] - fm[i]) / (2.0 * h);
    return out;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace oracles
