#include "gradgeom/composition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradgeom/errors.hpp"
#include "gradgeom/rng.hpp"

namespace gradgeom::composition {

void MixtureWeights::validate() const {
    if (weights.size() < 2) throw domain_error("MixtureWeights: need m >= 2 components");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw domain_error("MixtureWeights: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw domain_error("MixtureWeights: weights must sum to 1");
}

namespace {

void check_theta(const ExpFamily& family, const std::vector<double>& theta,
                 const char* who) {
    if (theta.size() != family.theta_dim())
        throw domain_error(std::string(who) + ": natural parameter length mismatch");
}

void check_eta(const ExpFamily& family, const std::vector<double>& eta, const char* who) {
    if (eta.size() != family.eta_dim())
        throw domain_error(std::string(who) + ": moment parameter length mismatch");
    if (family.kind == FamilyKind::categorical) {
        double sum = 0.0;
        for (double e : eta) {
            if (!(e > 0.0))
                throw domain_error(std::string(who) +
                                   ": eta on the simplex boundary (nonpositive entry)");
            sum += e;
        }
        if (std::fabs(sum - 1.0) > 1e-9)
            throw domain_error(std::string(who) + ": eta must sum to 1");
    }
}

}  // namespace

double log_partition(const ExpFamily& family, const std::vector<double>& theta) {
    check_theta(family, theta, "log_partition");
    if (family.kind == FamilyKind::gaussian_fixed_var) {
        double s = 0.0;
        for (double t : theta) s += t * t;
        return 0.5 * s;
    }
    // log(1 + sum exp(theta_i)), stabilized against the pinned 0 logit
    double mx = 0.0;
    for (double t : theta) mx = std::max(mx, t);
    double s = std::exp(-mx);
    for (double t : theta) s += std::exp(t - mx);
    return mx + std::log(s);
}

double negentropy(const ExpFamily& family, const std::vector<double>& eta) {
    check_eta(family, eta, "negentropy");
    if (family.kind == FamilyKind::gaussian_fixed_var) {
        double s = 0.0;
        for (double e : eta) s += e * e;
        return 0.5 * s;
    }
    double s = 0.0;
    for (double e : eta) s += e * std::log(e);
    return s;
}

std::vector<double> to_eta(const ExpFamily& family, const std::vector<double>& theta) {
    check_theta(family, theta, "to_eta");
    if (family.kind == FamilyKind::gaussian_fixed_var) return theta;
    std::vector<double> logits(theta);
    logits.push_back(0.0);  // pinned gauge
    return softmax(logits);
}

std::vector<double> to_theta(const ExpFamily& family, const std::vector<double>& eta) {
    check_eta(family, eta, "to_theta");
    if (family.kind == FamilyKind::gaussian_fixed_var) return eta;
    std::vector<double> theta(family.theta_dim());
    const double last = eta.back();
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = std::log(eta[i] / last);
    return theta;
}

double bregman_psi(const ExpFamily& family, const std::vector<double>& theta1,
                   const std::vector<double>& theta2) {
    check_theta(family, theta1, "bregman_psi");
    check_theta(family, theta2, "bregman_psi");
    const auto eta2 = to_eta(family, theta2);
    double inner = 0.0;
    for (std::size_t i = 0; i < theta1.size(); ++i)
        inner += eta2[i] * (theta1[i] - theta2[i]);
    return log_partition(family, theta1) - log_partition(family, theta2) - inner;
}

double bregman_phi(const ExpFamily& family, const std::vector<double>& eta1,
                   const std::vector<double>& eta2) {
    check_eta(family, eta1, "bregman_phi");
    check_eta(family, eta2, "bregman_phi");
    if (family.kind == FamilyKind::gaussian_fixed_var) {
        double s = 0.0;
        for (std::size_t i = 0; i < eta1.size(); ++i) {
            const double d = eta1[i] - eta2[i];
            s += d * d;
        }
        return 0.5 * s;
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < eta1.size(); ++i)
        kl += eta1[i] * std::log(eta1[i] / eta2[i]);
    return kl;
}

std::vector<double> eta_barycenter(const ExpFamily& family,
                                   const std::vector<std::vector<double>>& etas,
                                   const MixtureWeights& lambda) {
    lambda.validate();
    if (etas.size() != lambda.weights.size())
        throw domain_error("eta_barycenter: component count mismatch");
    for (const auto& e : etas) check_eta(family, e, "eta_barycenter");
    std::vector<double> out(family.eta_dim(), 0.0);
    for (std::size_t i = 0; i < etas.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += lambda.weights[i] * etas[i][j];
    return out;
}

std::vector<double> theta_barycenter(const std::vector<std::vector<double>>& thetas,
                                     const MixtureWeights& alpha,
                                     const std::vector<double>& theta0) {
    alpha.validate();
    if (thetas.size() != alpha.weights.size())
        throw domain_error("theta_barycenter: component count mismatch");
    for (const auto& t : thetas)
        if (t.size() != theta0.size())
            throw domain_error("theta_barycenter: component length mismatch");
    // unit weight vector: return the component untouched, so selecting one
    // model is exact rather than exact-up-to-rounding
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (alpha.weights[i] != 1.0) continue;
        bool rest_zero = true;
        for (std::size_t j = 0; j < thetas.size(); ++j)
            if (j != i && alpha.weights[j] != 0.0) rest_zero = false;
        if (rest_zero) return thetas[i];
    }
    std::vector<double> out = theta0;
    for (std::size_t i = 0; i < thetas.size(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] += alpha.weights[i] * (thetas[i][j] - theta0[j]);
    return out;
}

double duality_gap(const ExpFamily& family,
                   const std::vector<std::vector<double>>& thetas,
                   const MixtureWeights& lambda) {
    lambda.validate();
    if (thetas.size() != lambda.weights.size())
        throw domain_error("duality_gap: component count mismatch");
    const std::vector<double> origin(family.theta_dim(), 0.0);
    const auto merged = theta_barycenter(thetas, lambda, origin);
    const auto eta_of_merged = to_eta(family, merged);

    std::vector<std::vector<double>> etas;
    etas.reserve(thetas.size());
    for (const auto& t : thetas) etas.push_back(to_eta(family, t));
    const auto mixed = eta_barycenter(family, etas, lambda);

    double s = 0.0;
    for (std::size_t i = 0; i < mixed.size(); ++i) {
        const double d = eta_of_merged[i] - mixed[i];
        s += d * d;
    }
    return std::sqrt(s);
}

JointBudgetReport evaluate_joint_budget(const ExpFamily& family,
                                        const std::vector<double>& eta_mix,
                                        const std::vector<double>& eta0,
                                        const std::vector<double>& theta_merge,
                                        const std::vector<double>& theta0, double eps) {
    JointBudgetReport rep;
    rep.d_phi = bregman_phi(family, eta_mix, eta0);
    rep.d_psi = bregman_psi(family, theta_merge, theta0);
    rep.total = rep.d_phi + rep.d_psi;
    rep.within_budget = rep.total <= eps;
    return rep;
}

Model merge_models(const std::vector<Model>& models, const MixtureWeights& alpha,
                   const Model& base) {
    alpha.validate();
    if (models.size() != alpha.weights.size())
        throw domain_error("merge_models: model count does not match weight count");
    std::vector<std::vector<double>> thetas;
    thetas.reserve(models.size());
    for (const auto& m : models) {
        if (m.layer_dims() != base.layer_dims() || m.activation() != base.activation())
            throw domain_error("merge_models: architectures disagree");
        thetas.push_back(m.theta());
    }
    Model out = base;
    out.set_theta(theta_barycenter(thetas, alpha, base.theta()));
    return out;
}

Dataset mix_datasets(const std::vector<Dataset>& datasets, const MixtureWeights& lambda,
                     std::size_t n_out, std::uint64_t seed) {
    lambda.validate();
    if (datasets.size() != lambda.weights.size())
        throw domain_error("mix_datasets: dataset count does not match weight count");
    for (const auto& d : datasets)
        if (d.samples.empty()) throw domain_error("mix_datasets: empty source dataset");

    Dataset out;
    out.loss_kind = datasets.front().loss_kind;
    out.samples.reserve(n_out);
    std::vector<std::size_t> cursor(datasets.size(), 0);
    Rng rng(seed);
    for (std::size_t n = 0; n < n_out; ++n) {
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t src = datasets.size() - 1;
        for (std::size_t i = 0; i < lambda.weights.size(); ++i) {
            acc += lambda.weights[i];
            if (u < acc) {
                src = i;
                break;
            }
        }
        const auto& pool = datasets[src].samples;
        out.samples.push_back(pool[cursor[src] % pool.size()]);
        ++cursor[src];
    }
    return out;
}

}  // namespace gradgeom::composition
