#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gradgeom/fisher.hpp"
#include "gradgeom/model.hpp"

namespace gradgeom::continual {

struct EwcConfig {
    double lambda = 0.0;
    fisher::FisherDiagonal fisher;
    std::vector<double> theta_old;
    bool empty_buffer = false;  // k = 0: zero Fisher, penalty inert
};

struct ReplayBuffer {
    std::vector<Sample> samples;
};

struct SweepRecord {
    std::size_t k = 0;
    double lambda = 0.0;
    double forgetting = 0.0;  // old-task loss increase after task-b training
    double new_loss = 0.0;    // final new-task loss
    std::uint64_t seed = 0;
};

// mean batch loss plus (lambda/2) sum_k F_kk (theta_k - theta_old_k)^2
double ewc_loss(const Model& model, const Dataset& batch, const EwcConfig& cfg);
double ewc_penalty(const Model& model, const EwcConfig& cfg);

// exact Fisher over the buffer; theta_old snapshots the model's current theta
EwcConfig build_config(const Model& model, const ReplayBuffer& buffer, double lambda,
                       LossKind loss_kind);

struct TrainOptions {
    std::size_t steps = 0;
    double alpha = 0.01;  // step size
    std::uint64_t seed = 0;
    std::size_t batch_size = 0;  // 0: full batch (default); >0: seeded shuffling
};

// full-batch gradient descent on the (optionally EWC-regularized) mean loss.
// Throws domain_error naming the step if the loss turns non-finite.
Model train_task(const Model& model, const Dataset& data, const TrainOptions& opts,
                 const std::optional<EwcConfig>& regularizer = std::nullopt);

struct SweepOptions {
    std::vector<std::size_t> k_grid;
    std::vector<double> lambda_grid;
    std::size_t steps = 200;
    double alpha = 0.05;
    std::vector<std::uint64_t> seeds;
    double replay_weight = 1.0;    // weight of replayed samples vs new ones
    bool uniform_buffer = false;   // default: Fisher-guided top-k selection
};

// for each (k, lambda, seed): train on task_a, snapshot, fill the buffer,
// train on task_b plus the replayed batch under the EWC penalty, record
// forgetting and the final new-task loss. Rows sorted by (k, lambda, seed).
std::vector<SweepRecord> budget_sweep(const Model& init, const Dataset& task_a,
                                      const Dataset& task_b, const SweepOptions& opts);

}  // namespace gradgeom::continual
