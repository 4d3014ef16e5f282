#include "gradgeom/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradgeom/errors.hpp"

namespace gradgeom::subspace {

SubspaceBasis make_basis(Matrix m, BasisOrigin origin) {
    if (m.cols == 0 || m.cols > m.rows)
        throw domain_error("make_basis: need 1 <= r <= K");
    // ||B^T B - I||_inf <= 1e-10
    for (std::size_t i = 0; i < m.cols; ++i) {
        for (std::size_t j = i; j < m.cols; ++j) {
            double d = 0.0;
            for (std::size_t r = 0; r < m.rows; ++r) d += m(r, i) * m(r, j);
            if (std::fabs(d - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw domain_error("make_basis: columns are not orthonormal");
        }
    }
    SubspaceBasis b;
    b.r = m.cols;
    b.basis = std::move(m);
    b.origin = origin;
    return b;
}

SubspaceBasis icl_subspace(const Model& model, const std::vector<Sample>& demos,
                           std::size_t r, LossKind loss_kind) {
    if (demos.empty()) throw domain_error("icl_subspace: need at least one demonstration");
    if (r < 1) throw domain_error("icl_subspace: requested rank must be >= 1");
    const std::size_t k = demos.size();
    const std::size_t kk = model.param_count();

    Matrix stack(k, kk);
    for (std::size_t i = 0; i < k; ++i) {
        const auto g = model.grad_theta(demos[i], loss_kind);
        for (std::size_t j = 0; j < kk; ++j) stack(i, j) = g[j];
    }

    const SvdResult svd = thin_svd(stack);
    if (svd.sigma.empty() || svd.sigma.front() == 0.0)
        throw domain_error("icl_subspace: gradient stack is identically zero");
    const double cut = 1e-10 * svd.sigma.front();

    std::size_t rank = 0;
    while (rank < svd.sigma.size() && svd.sigma[rank] > cut) ++rank;
    const std::size_t keep = std::min(r, rank);

    Matrix basis(kk, keep);
    for (std::size_t c = 0; c < keep; ++c)
        for (std::size_t row = 0; row < kk; ++row) basis(row, c) = svd.v(row, c);

    SubspaceBasis out;
    out.basis = std::move(basis);
    out.r = keep;
    out.origin = BasisOrigin::icl;
    return out;
}

SubspaceBasis lora_basis(const LoraAdapter& adapter) {
    const QrResult qr = householder_qr(adapter.a);
    SubspaceBasis out;
    out.basis = qr.q;
    out.r = adapter.a.cols;
    out.origin = BasisOrigin::lora;
    return out;
}

Model apply_lora(const Model& model, const LoraAdapter& adapter) {
    if (adapter.a.cols != adapter.b.rows)
        throw domain_error("apply_lora: inner ranks of A and B disagree");
    const std::size_t flat = adapter.a.rows * adapter.b.cols;
    if (flat != model.param_count())
        throw domain_error("apply_lora: A*B flattens to " + std::to_string(flat) +
                           " entries but the model has K = " +
                           std::to_string(model.param_count()));
    const Matrix delta = matmul(adapter.a, adapter.b);
    auto theta = model.theta();
    for (std::size_t i = 0; i < theta.size(); ++i)
        theta[i] += adapter.scale * delta.data[i];
    Model out = model;
    out.set_theta(std::move(theta));
    return out;
}

std::vector<double> principal_angles(const SubspaceBasis& b1, const SubspaceBasis& b2) {
    if (b1.basis.rows != b2.basis.rows)
        throw domain_error("principal_angles: ambient dimensions disagree");
    const Matrix prod = matmul(transpose(b1.basis), b2.basis);  // r1 x r2
    const SvdResult svd = thin_svd(prod);
    const std::size_t count = std::min(b1.r, b2.r);
    std::vector<double> angles(count);
    for (std::size_t i = 0; i < count; ++i)
        angles[i] = std::acos(std::clamp(svd.sigma[i], 0.0, 1.0));
    std::sort(angles.begin(), angles.end());
    return angles;
}

}  // namespace gradgeom::subspace
