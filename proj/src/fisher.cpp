#include "gradgeom/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "gradgeom/errors.hpp"
#include "gradgeom/rng.hpp"

namespace gradgeom::fisher {

FisherDiagonal exact_fisher_diag(const Model& model, const Dataset& data) {
    if (data.samples.empty()) throw domain_error("exact_fisher_diag: data is empty");
    FisherDiagonal out;
    out.f_hat.assign(model.param_count(), 0.0);
    for (const auto& s : data.samples) {
        const auto g = model.grad_theta(s, data.loss_kind);
        for (std::size_t k = 0; k < g.size(); ++k) out.f_hat[k] += g[k] * g[k];
    }
    const double inv = 1.0 / static_cast<double>(data.samples.size());
    for (auto& x : out.f_hat) x *= inv;
    out.exact = true;
    return out;
}

FisherDiagonal hutchinson_fisher_diag(const Model& model, const Dataset& data,
                                      std::size_t m, std::uint64_t seed) {
    if (m < 1) throw domain_error("hutchinson_fisher_diag: sketch count m must be >= 1");
    if (data.samples.empty()) throw domain_error("hutchinson_fisher_diag: data is empty");
    const std::size_t k = model.param_count();
    const std::size_t n = data.samples.size();

    FisherDiagonal out;
    out.f_hat.assign(k, 0.0);
    out.m = m;
    out.seed = seed;
    out.exact = false;

    for (std::size_t sk = 0; sk < m; ++sk) {
        Rng rng = Rng::derived(seed, sk);
        const auto z = rng.rademacher_vector(k);
        // J z then J^T (J z), streamed per sample: w_n = <g_n, z>, acc += w_n g_n
        std::vector<double> acc(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = model.grad_theta(data.samples[i], data.loss_kind);
            double w = 0.0;
            for (std::size_t j = 0; j < k; ++j) w += g[j] * z[j];
            for (std::size_t j = 0; j < k; ++j) acc[j] += w * g[j];
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < k; ++j) out.f_hat[j] += z[j] * acc[j] * inv_n;
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    for (auto& x : out.f_hat) x *= inv_m;
    return out;
}

std::vector<double> replay_scores(const Model& model, const Dataset& pool) {
    if (pool.samples.empty()) throw domain_error("replay_scores: pool is empty");
    std::vector<double> s(pool.samples.size());
    for (std::size_t i = 0; i < pool.samples.size(); ++i) {
        const auto g = model.grad_theta(pool.samples[i], pool.loss_kind);
        s[i] = dot(g, g);
    }
    return s;
}

double fisher_trace_ratio(const Model& model, const Dataset& batch,
                          const Dataset& clean_ref) {
    if (batch.samples.empty() || clean_ref.samples.empty())
        throw domain_error("fisher_trace_ratio: both sets must be nonempty");
    auto mean_sq = [&](const Dataset& d) {
        double acc = 0.0;
        for (const auto& s : d.samples) {
            const auto g = model.grad_theta(s, d.loss_kind);
            acc += dot(g, g);
        }
        return acc / static_cast<double>(d.samples.size());
    };
    const double denom = mean_sq(clean_ref);
    if (denom == 0.0)
        throw domain_error("fisher_trace_ratio: clean reference gradients vanish");
    return mean_sq(batch) / denom;
}

double solidification_ratio(const FisherDiagonal& fisher) {
    double trace = 0.0, mx = 0.0;
    for (double x : fisher.f_hat) {
        trace += x;
        mx = std::max(mx, x);
    }
    if (trace <= 0.0) throw domain_error("solidification_ratio: Fisher trace is zero");
    return mx / trace;
}

AlignmentReport gradient_alignment(const std::vector<double>& g_clean,
                                   const std::vector<double>& g_mal) {
    const double nc = norm2(g_clean), nm = norm2(g_mal);
    if (nc == 0.0 || nm == 0.0)
        throw domain_error("gradient_alignment: zero vector has no direction");
    AlignmentReport rep;
    rep.cosine = std::clamp(dot(g_clean, g_mal) / (nc * nm), -1.0, 1.0);
    rep.angle = std::acos(rep.cosine);
    rep.persistence_proxy = (rep.angle < 1e-12) ? 1e12 : 1.0 / rep.angle;
    return rep;
}

}  // namespace gradgeom::fisher
