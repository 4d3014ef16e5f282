#pragma once

#include <cstdint>
#include <vector>

#include "gradgeom/model.hpp"

namespace gradgeom::composition {

// Two exponential families with closed-form Legendre pairs.
//  - gaussian_fixed_var: unit-variance Gaussian mean; theta and eta coincide.
//  - categorical: d outcomes; natural parameters are the first d-1 logits
//    with the last pinned to 0, moment parameters are the full probability
//    vector (open simplex interior).
enum class FamilyKind { gaussian_fixed_var, categorical };

struct ExpFamily {
    FamilyKind kind = FamilyKind::gaussian_fixed_var;
    std::size_t dim = 1;  // d: vector dimension (gaussian) or outcome count

    std::size_t theta_dim() const {
        return kind == FamilyKind::categorical ? dim - 1 : dim;
    }
    std::size_t eta_dim() const { return dim; }
};

struct MixtureWeights {
    std::vector<double> weights;  // nonnegative, sums to 1 within 1e-12, m >= 2

    void validate() const;
};

double log_partition(const ExpFamily& family, const std::vector<double>& theta);  // psi
double negentropy(const ExpFamily& family, const std::vector<double>& eta);       // phi

std::vector<double> to_eta(const ExpFamily& family, const std::vector<double>& theta);
std::vector<double> to_theta(const ExpFamily& family, const std::vector<double>& eta);

// D_psi(theta1 || theta2); categorical: KL of the theta2-distribution from
// the theta1-distribution (i.e. KL(p2 || p1))
double bregman_psi(const ExpFamily& family, const std::vector<double>& theta1,
                   const std::vector<double>& theta2);

// D_phi(eta1 || eta2); categorical: KL(p1 || p2)
double bregman_phi(const ExpFamily& family, const std::vector<double>& eta1,
                   const std::vector<double>& eta2);

std::vector<double> eta_barycenter(const ExpFamily& family,
                                   const std::vector<std::vector<double>>& etas,
                                   const MixtureWeights& lambda);

// theta0 + sum_i alpha_i (theta_i - theta0); works for any flat vectors
std::vector<double> theta_barycenter(const std::vector<std::vector<double>>& thetas,
                                     const MixtureWeights& alpha,
                                     const std::vector<double>& theta0);

// || to_eta(sum_i lambda_i theta_i) - sum_i lambda_i to_eta(theta_i) ||
double duality_gap(const ExpFamily& family,
                   const std::vector<std::vector<double>>& thetas,
                   const MixtureWeights& lambda);

// both Bregman terms of the coupled composition budget, and whether the
// total respects eps
struct JointBudgetReport {
    double d_phi = 0.0;
    double d_psi = 0.0;
    double total = 0.0;
    bool within_budget = false;
};

JointBudgetReport evaluate_joint_budget(const ExpFamily& family,
                                        const std::vector<double>& eta_mix,
                                        const std::vector<double>& eta0,
                                        const std::vector<double>& theta_merge,
                                        const std::vector<double>& theta0, double eps);

Model merge_models(const std::vector<Model>& models, const MixtureWeights& alpha,
                   const Model& base);

// n_out samples whose sources are seeded categorical draws by lambda;
// each source is consumed in order (wrapping when exhausted)
Dataset mix_datasets(const std::vector<Dataset>& datasets, const MixtureWeights& lambda,
                     std::size_t n_out, std::uint64_t seed);

}  // namespace gradgeom::composition
