#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gradgeom/matrix.hpp"
#include "gradgeom/model.hpp"

namespace gradgeom::interaction {

struct InteractionScores {
    std::vector<double> phi_d;  // length N, data utility
    std::vector<double> phi_p;  // length K, parameter importance
    std::uint64_t expansion_point_hash = 0;
};

struct SelectionResult {
    std::vector<std::size_t> data_indices;  // strictly increasing, <= b entries
    std::vector<std::uint8_t> param_mask;   // length K, 0/1, ||mask||_0 <= floor(rho*K)
};

// test hook: invoked with the element count of every transient buffer the
// streaming path allocates, so a harness can assert no N*K buffer exists
using AllocHook = void (*)(std::size_t);
void set_alloc_hook(AllocHook hook);

// mean of per-sample gradients over the validation set
std::vector<double> validation_gradient(const Model& model, const Dataset& val_set);

// single pass, O(K) state: phi_d[n] = <g_n, v>, phi_p += g_n (.) v
InteractionScores streaming_scores(const Model& model, const Dataset& train_set,
                                   const std::vector<double>& v);

// sharded variant; bit-identical to the serial pass (shards merged in index order)
InteractionScores streaming_scores_sharded(const Model& model, const Dataset& train_set,
                                           const std::vector<double>& v,
                                           std::size_t shards);

// exact N x K oracle, capped at 1e7 entries
Matrix materialize_M(const Model& model, const Dataset& train_set,
                     const std::vector<double>& v);

// indices of the b largest phi_d, ties broken by lowest index, returned sorted
std::vector<std::size_t> select_data(const InteractionScores& scores, std::size_t b);

// 0/1 mask of the floor(rho*K) largest phi_p entries
std::vector<std::uint8_t> select_params(const InteractionScores& scores, double rho);

// shared top-k kernel (largest values, ties by lowest index, ascending indices)
std::vector<std::size_t> top_k_indices(const std::vector<double>& scores, std::size_t k);

}  // namespace gradgeom::interaction
