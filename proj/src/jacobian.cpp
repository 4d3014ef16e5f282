#include "gradgeom/jacobian.hpp"

#include <cmath>

#include "gradgeom/errors.hpp"

namespace gradgeom::jacobian {

DecompositionReport decompose(const Model& model, const std::vector<double>& x,
                              const std::vector<double>& dx,
                              const std::vector<double>& dtheta) {
    DecompositionReport rep;
    rep.data_term = model.jvp_input(x, dx);
    rep.param_term = model.jvp_param(x, dtheta);

    const auto base = model.forward(x);
    std::vector<double> xp(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xp[i] = x[i] + dx[i];
    Model shifted = model;
    {
        auto theta = model.theta();
        if (dtheta.size() != theta.size())
            throw domain_error("decompose: dtheta length mismatch");
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += dtheta[i];
        shifted.set_theta(std::move(theta));
    }
    const auto moved = shifted.forward(xp);

    rep.residual.resize(base.size());
    double err = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        rep.residual[i] = moved[i] - base[i] - rep.data_term[i] - rep.param_term[i];
        err += rep.residual[i] * rep.residual[i];
    }
    rep.linearization_error = std::sqrt(err);
    return rep;
}

namespace {

Realization realize(const Matrix& j, const std::vector<double>& dy_target) {
    const SvdResult svd = thin_svd(j);
    Realization out;
    out.perturbation = pinv_solve(svd, dy_target);
    const auto achieved = matvec(j, out.perturbation);
    double res = 0.0, tgt = 0.0;
    for (std::size_t i = 0; i < dy_target.size(); ++i) {
        const double d = achieved[i] - dy_target[i];
        res += d * d;
        tgt += dy_target[i] * dy_target[i];
    }
    out.residual_norm = std::sqrt(res);
    out.out_of_image = out.residual_norm > 1e-8 * std::sqrt(tgt);
    return out;
}

}  // namespace

Realization min_norm_data_realization(const Model& model, const std::vector<double>& x,
                                      const std::vector<double>& dy_target) {
    if (dy_target.size() != model.output_dim())
        throw domain_error("min_norm_data_realization: target length mismatch");
    return realize(model.full_jacobian_input(x), dy_target);
}

Realization min_norm_param_realization(const Model& model, const std::vector<double>& x,
                                       const std::vector<double>& dy_target) {
    if (dy_target.size() != model.output_dim())
        throw domain_error("min_norm_param_realization: target length mismatch");
    return realize(model.full_jacobian_param(x), dy_target);
}

std::vector<double> null_project_input(const Model& model, const std::vector<double>& x,
                                       const std::vector<double>& p) {
    if (p.size() != model.input_dim())
        throw domain_error("null_project_input: vector length mismatch");
    const Matrix j = model.full_jacobian_input(x);
    const SvdResult svd = thin_svd(j);
    // (I - J^+ J) p = p - sum over effective right singular vectors of <v_k, p> v_k
    const double cut = 1e-10 * (svd.sigma.empty() ? 0.0 : svd.sigma.front());
    std::vector<double> out = p;
    for (std::size_t k = 0; k < svd.sigma.size(); ++k) {
        if (svd.sigma[k] <= cut || svd.sigma[k] == 0.0) continue;
        double d = 0.0;
        for (std::size_t r = 0; r < p.size(); ++r) d += svd.v(r, k) * p[r];
        for (std::size_t r = 0; r < p.size(); ++r) out[r] -= d * svd.v(r, k);
    }
    return out;
}

double augmentation_regularizer(const Model& model, const Sample& sample,
                                LossKind loss_kind, const Matrix& sigma) {
    if (sigma.rows != model.input_dim() || sigma.cols != model.input_dim())
        throw domain_error("augmentation_regularizer: Sigma must be d_in x d_in");
    for (std::size_t i = 0; i < sigma.rows; ++i)
        for (std::size_t j = i + 1; j < sigma.cols; ++j)
            if (std::fabs(sigma(i, j) - sigma(j, i)) > 1e-12)
                throw domain_error("augmentation_regularizer: Sigma is not symmetric");

    const auto out = model.forward(sample.x);
    const auto u = loss_output_gradient(out, sample, loss_kind);
    const auto gx = model.vjp_input(sample.x, u);  // grad_x loss
    const auto sg = matvec(sigma, gx);
    return 0.5 * dot(gx, sg);
}

}  // namespace gradgeom::jacobian
