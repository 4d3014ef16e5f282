#include "gradgeom/continual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradgeom/errors.hpp"
#include "gradgeom/interaction.hpp"
#include "gradgeom/rng.hpp"

namespace gradgeom::continual {

namespace {

double mean_loss(const Model& model, const Dataset& data) {
    if (data.samples.empty()) throw domain_error("mean loss over an empty dataset");
    double acc = 0.0;
    for (const auto& s : data.samples) acc += model.loss(s, data.loss_kind);
    return acc / static_cast<double>(data.samples.size());
}

}  // namespace

double ewc_penalty(const Model& model, const EwcConfig& cfg) {
    if (cfg.lambda == 0.0) return 0.0;
    const auto& theta = model.theta();
    if (cfg.theta_old.size() != theta.size() || cfg.fisher.f_hat.size() != theta.size())
        throw domain_error("ewc_penalty: config length does not match K");
    double acc = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double d = theta[k] - cfg.theta_old[k];
        acc += cfg.fisher.f_hat[k] * d * d;
    }
    return 0.5 * cfg.lambda * acc;
}

double ewc_loss(const Model& model, const Dataset& batch, const EwcConfig& cfg) {
    return mean_loss(model, batch) + ewc_penalty(model, cfg);
}

EwcConfig build_config(const Model& model, const ReplayBuffer& buffer, double lambda,
                       LossKind loss_kind) {
    if (lambda < 0.0) throw domain_error("build_config: lambda must be nonnegative");
    EwcConfig cfg;
    cfg.lambda = lambda;
    cfg.theta_old = model.theta();
    if (buffer.samples.empty()) {
        cfg.fisher.f_hat.assign(model.param_count(), 0.0);
        cfg.fisher.exact = true;
        cfg.empty_buffer = true;
        return cfg;
    }
    Dataset d;
    d.samples = buffer.samples;
    d.loss_kind = loss_kind;
    cfg.fisher = fisher::exact_fisher_diag(model, d);
    return cfg;
}

namespace {

// one GD pass over a weighted sample set with optional EWC penalty
Model descend(const Model& start, const std::vector<Sample>& samples,
              const std::vector<double>& weights, LossKind loss_kind,
              const TrainOptions& opts, const std::optional<EwcConfig>& reg) {
    if (!(opts.alpha > 0.0)) throw domain_error("train_task: alpha must be positive");
    if (samples.empty()) throw domain_error("train_task: dataset is empty");
    if (samples.size() != weights.size())
        throw domain_error("train_task: weight vector length mismatch");

    double wsum = 0.0;
    for (double w : weights) wsum += w;
    if (!(wsum > 0.0)) throw domain_error("train_task: weights sum to zero");

    Model model = start;
    const std::size_t kk = model.param_count();

    for (std::size_t step = 0; step < opts.steps; ++step) {
        std::vector<double> grad(kk, 0.0);
        double loss = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Sample& s = samples[i];
            loss += weights[i] * model.loss(s, loss_kind);
            const auto g = model.grad_theta(s, loss_kind);
            for (std::size_t k = 0; k < kk; ++k) grad[k] += weights[i] * g[k];
        }
        const double inv = 1.0 / wsum;
        loss *= inv;
        for (auto& g : grad) g *= inv;

        if (reg && reg->lambda != 0.0) {
            loss += ewc_penalty(model, *reg);
            const auto& theta = model.theta();
            for (std::size_t k = 0; k < kk; ++k)
                grad[k] += reg->lambda * reg->fisher.f_hat[k] *
                           (theta[k] - reg->theta_old[k]);
        }
        if (!std::isfinite(loss))
            throw domain_error("train_task: loss diverged at step " + std::to_string(step));

        auto theta = model.theta();
        for (std::size_t k = 0; k < kk; ++k) theta[k] -= opts.alpha * grad[k];
        model.set_theta(std::move(theta));
    }
    return model;
}

}  // namespace

Model train_task(const Model& model, const Dataset& data, const TrainOptions& opts,
                 const std::optional<EwcConfig>& regularizer) {
    std::vector<double> w(data.samples.size(), 1.0);
    return descend(model, data.samples, w, data.loss_kind, opts, regularizer);
}

std::vector<SweepRecord> budget_sweep(const Model& init, const Dataset& task_a,
                                      const Dataset& task_b, const SweepOptions& opts) {
    if (opts.k_grid.empty() || opts.lambda_grid.empty() || opts.seeds.empty())
        throw domain_error("budget_sweep: grids and seed list must be nonempty");

    std::vector<SweepRecord> records;
    TrainOptions train{.steps = opts.steps, .alpha = opts.alpha, .seed = 0};

    for (std::uint64_t seed : opts.seeds) {
        // seed-specific jitter of the shared initialization
        Model start = init;
        {
            Rng rng(seed);
            auto theta = start.theta();
            for (auto& t : theta) t += 0.01 * rng.normal();
            start.set_theta(std::move(theta));
        }
        const Model after_a = train_task(start, task_a, train);
        const double base_old_loss =
            [&] {
                double acc = 0.0;
                for (const auto& s : task_a.samples) acc += after_a.loss(s, task_a.loss_kind);
                return acc / static_cast<double>(task_a.samples.size());
            }();

        const auto scores = fisher::replay_scores(after_a, task_a);

        for (std::size_t k : opts.k_grid) {
            if (k > task_a.samples.size())
                throw domain_error("budget_sweep: buffer size exceeds the task-a pool");
            ReplayBuffer buffer;
            if (k > 0) {
                if (opts.uniform_buffer) {
                    Rng rng = Rng::derived(seed, 0x7531);
                    std::vector<std::size_t> idx(task_a.samples.size());
                    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                    for (std::size_t i = idx.size(); i-- > 1;)
                        std::swap(idx[i], idx[rng.below(i + 1)]);
                    idx.resize(k);
                    std::sort(idx.begin(), idx.end());
                    for (auto i : idx) buffer.samples.push_back(task_a.samples[i]);
                } else {
                    for (auto i : interaction::top_k_indices(scores, k))
                        buffer.samples.push_back(task_a.samples[i]);
                }
            }

            for (double lambda : opts.lambda_grid) {
                const EwcConfig cfg = build_config(after_a, buffer, lambda, task_a.loss_kind);

                std::vector<Sample> mixed = task_b.samples;
                std::vector<double> weights(mixed.size(), 1.0);
                for (const auto& s : buffer.samples) {
                    mixed.push_back(s);
                    weights.push_back(opts.replay_weight);
                }
                const Model after_b =
                    descend(after_a, mixed, weights, task_b.loss_kind, train, cfg);

                SweepRecord rec;
                rec.k = k;
                rec.lambda = lambda;
                rec.seed = seed;
                {
                    double acc = 0.0;
                    for (const auto& s : task_a.samples)
                        acc += after_b.loss(s, task_a.loss_kind);
                    rec.forgetting =
                        acc / static_cast<double>(task_a.samples.size()) - base_old_loss;
                }
                {
                    double acc = 0.0;
                    for (const auto& s : task_b.samples)
                        acc += after_b.loss(s, task_b.loss_kind);
                    rec.new_loss = acc / static_cast<double>(task_b.samples.size());
                }
                if (!std::isfinite(rec.forgetting) || !std::isfinite(rec.new_loss))
                    throw domain_error("budget_sweep: non-finite record at k=" +
                                       std::to_string(k));
                records.push_back(rec);
            }
        }
    }

    std::stable_sort(records.begin(), records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) {
                         if (a.k != b.k) return a.k < b.k;
                         if (a.lambda != b.lambda) return a.lambda < b.lambda;
                         return a.seed < b.seed;
                     });
    return records;
}

}  // namespace gradgeom::continual
