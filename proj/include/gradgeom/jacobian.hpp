#pragma once

#include <vector>

#include "gradgeom/matrix.hpp"
#include "gradgeom/model.hpp"

namespace gradgeom::jacobian {

struct DecompositionReport {
    std::vector<double> data_term;   // J_x dx
    std::vector<double> param_term;  // J_theta dtheta
    std::vector<double> residual;    // exact output change minus both terms
    double linearization_error = 0.0;
};

struct Realization {
    std::vector<double> perturbation;
    double residual_norm = 0.0;
    bool out_of_image = false;  // residual > 1e-8 * ||target||
};

// first-order output decomposition at (x, theta)
DecompositionReport decompose(const Model& model, const std::vector<double>& x,
                              const std::vector<double>& dx,
                              const std::vector<double>& dtheta);

// least-norm dx with J_x dx ~= dy_target (SVD pseudoinverse, rcond 1e-10)
Realization min_norm_data_realization(const Model& model, const std::vector<double>& x,
                                      const std::vector<double>& dy_target);

// least-norm dtheta with J_theta dtheta ~= dy_target
Realization min_norm_param_realization(const Model& model, const std::vector<double>& x,
                                       const std::vector<double>& dy_target);

// component of p in Null(J_x), i.e. (I - J_x^+ J_x) p
std::vector<double> null_project_input(const Model& model, const std::vector<double>& x,
                                       const std::vector<double>& p);

// 1/2 (grad_x loss)^T Sigma (grad_x loss), via one input VJP;
// Sigma must be symmetric (PSD expected)
double augmentation_regularizer(const Model& model, const Sample& sample,
                                LossKind loss_kind, const Matrix& sigma);

}  // namespace gradgeom::jacobian
