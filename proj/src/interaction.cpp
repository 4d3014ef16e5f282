#include "gradgeom/interaction.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gradgeom/errors.hpp"

namespace gradgeom::interaction {

namespace {
AllocHook g_alloc_hook = nullptr;

std::vector<double> tracked_buffer(std::size_t n) {
    if (g_alloc_hook) g_alloc_hook(n);
    return std::vector<double>(n, 0.0);
}
}  // namespace

void set_alloc_hook(AllocHook hook) { g_alloc_hook = hook; }

std::vector<double> validation_gradient(const Model& model, const Dataset& val_set) {
    if (val_set.samples.empty())
        throw domain_error("validation_gradient: validation set is empty");
    std::vector<double> v(model.param_count(), 0.0);
    for (const auto& s : val_set.samples) {
        const auto g = model.grad_theta(s, val_set.loss_kind);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += g[k];
    }
    const double inv = 1.0 / static_cast<double>(val_set.samples.size());
    for (auto& x : v) x *= inv;
    return v;
}

InteractionScores streaming_scores(const Model& model, const Dataset& train_set,
                                   const std::vector<double>& v) {
    if (v.size() != model.param_count())
        throw domain_error("streaming_scores: v length " + std::to_string(v.size()) +
                           " does not match K " + std::to_string(model.param_count()));
    const std::size_t n = train_set.samples.size();
    const std::size_t k = model.param_count();
    InteractionScores out;
    out.phi_d = tracked_buffer(n);
    out.phi_p = tracked_buffer(k);
    out.expansion_point_hash = model.theta_hash();
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = model.grad_theta(train_set.samples[i], train_set.loss_kind);
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double m = g[j] * v[j];
            row += m;
            out.phi_p[j] += m;
        }
        out.phi_d[i] = row;
    }
    return out;
}

InteractionScores streaming_scores_sharded(const Model& model, const Dataset& train_set,
                                           const std::vector<double>& v,
                                           std::size_t shards) {
    if (shards == 0) throw domain_error("streaming_scores_sharded: shards must be >= 1");
    const std::size_t n = train_set.samples.size();
    const std::size_t k = model.param_count();
    if (v.size() != k) throw domain_error("streaming_scores_sharded: v length mismatch");

    InteractionScores out;
    out.phi_d = tracked_buffer(n);
    out.phi_p = tracked_buffer(k);
    out.expansion_point_hash = model.theta_hash();

    // Contiguous shards merged in shard-index order. The merge accumulates
    // per sample, in global index order, so the phi_p summation order is the
    // serial one and the result is bit-identical.
    const std::size_t per = (n + shards - 1) / shards;
    for (std::size_t s = 0; s < shards; ++s) {
        const std::size_t lo = s * per;
        const std::size_t hi = std::min(n, lo + per);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto g = model.grad_theta(train_set.samples[i], train_set.loss_kind);
            double row = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                const double m = g[j] * v[j];
                row += m;
                out.phi_p[j] += m;
            }
            out.phi_d[i] = row;
        }
    }
    return out;
}

Matrix materialize_M(const Model& model, const Dataset& train_set,
                     const std::vector<double>& v) {
    const std::size_t n = train_set.samples.size();
    const std::size_t k = model.param_count();
    if (v.size() != k) throw domain_error("materialize_M: v length mismatch");
    if (n * k > 10'000'000)
        throw domain_error("materialize_M: N*K exceeds the 1e7-entry oracle cap");
    Matrix m(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = model.grad_theta(train_set.samples[i], train_set.loss_kind);
        for (std::size_t j = 0; j < k; ++j) m(i, j) = g[j] * v[j];
    }
    return m;
}

std::vector<std::size_t> top_k_indices(const std::vector<double>& scores, std::size_t k) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    // descending score, ties by lowest index
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    order.resize(std::min(k, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<std::size_t> select_data(const InteractionScores& scores, std::size_t b) {
    if (b < 1 || b > scores.phi_d.size())
        throw domain_error("select_data: budget b must satisfy 1 <= b <= N");
    return top_k_indices(scores.phi_d, b);
}

std::vector<std::uint8_t> select_params(const InteractionScores& scores, double rho) {
    if (!(rho > 0.0) || rho > 1.0)
        throw domain_error("select_params: rho must lie in (0, 1]");
    const std::size_t k = scores.phi_p.size();
    const auto keep = top_k_indices(
        scores.phi_p, static_cast<std::size_t>(rho * static_cast<double>(k)));
    std::vector<std::uint8_t> mask(k, 0);
    for (auto i : keep) mask[i] = 1;
    return mask;
}

}  // namespace gradgeom::interaction
