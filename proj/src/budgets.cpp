#include "gradgeom/budgets.hpp"

#include <cmath>
#include <string>

#include "gradgeom/errors.hpp"
#include "gradgeom/rng.hpp"

namespace gradgeom::budgets {

void SafetyConfig::validate() const {
    if (!(eps_d > 0.0)) throw domain_error("SafetyConfig: eps_d must be positive");
    if (!(gamma_p > 0.0)) throw domain_error("SafetyConfig: gamma_p must be positive");
    if (lip_s < 0.0) throw domain_error("SafetyConfig: lip_S must be nonnegative");
    for (std::size_t i = 0; i < intervention_steps.size(); ++i) {
        if (intervention_steps[i] > horizon)
            throw domain_error("SafetyConfig: intervention step " +
                               std::to_string(intervention_steps[i]) +
                               " exceeds horizon T");
        if (i > 0 && intervention_steps[i] <= intervention_steps[i - 1])
            throw domain_error("SafetyConfig: intervention steps must strictly increase");
    }
}

PrivacyBudget PrivacyBudget::from_dimensions(double eps_d, double eps_p, std::size_t m,
                                             std::size_t d) {
    if (m == 0 || m > d)
        throw domain_error("PrivacyBudget: need 1 <= m <= d for rho = m/d");
    PrivacyBudget b;
    b.eps_d = eps_d;
    b.eps_p = eps_p;
    b.rho = static_cast<double>(m) / static_cast<double>(d);
    b.validate();
    return b;
}

void PrivacyBudget::validate() const {
    if (eps_d < 0.0 || eps_p < 0.0)
        throw domain_error("PrivacyBudget: budgets must be nonnegative");
    if (!(rho > 0.0) || rho > 1.0)
        throw domain_error("PrivacyBudget: rho must lie in (0, 1]");
}

double lipschitz_power_iteration(const Model& model, const std::vector<double>& x,
                                 std::size_t iters, std::uint64_t seed) {
    if (iters < 1) throw domain_error("lipschitz_power_iteration: iters must be >= 1");

    for (int restart = 0; restart <= 3; ++restart) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(restart));
        auto v = rng.normal_vector(model.input_dim());
        const double n0 = norm2(v);
        if (n0 == 0.0) continue;
        for (auto& c : v) c /= n0;

        bool degenerate = false;
        for (std::size_t t = 0; t < iters; ++t) {
            const auto w = model.jvp_input(x, v);       // J v
            const auto back = model.vjp_input(x, w);    // J^T J v
            const double nb = norm2(back);
            if (nb < 1e-14) {
                degenerate = true;
                break;
            }
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = back[i] / nb;
        }
        if (!degenerate) return norm2(model.jvp_input(x, v));
    }
    // zero map after repeated degenerate starts
    return 0.0;
}

double lipschitz_probe_max(const Model& model, const Dataset& data, double eps_d,
                           std::size_t probes, std::size_t iters, std::uint64_t seed) {
    if (data.samples.empty()) throw domain_error("lipschitz_probe_max: dataset is empty");
    if (probes < 1) throw domain_error("lipschitz_probe_max: probes must be >= 1");
    if (eps_d < 0.0) throw domain_error("lipschitz_probe_max: eps_d must be nonnegative");

    std::vector<double> mu(model.input_dim(), 0.0);
    for (const auto& s : data.samples)
        for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += s.x[i];
    for (auto& c : mu) c /= static_cast<double>(data.samples.size());

    double best = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        Rng rng = Rng::derived(seed, 0x9000 + p);
        auto dir = rng.normal_vector(mu.size());
        const double nd = norm2(dir);
        const double radius =
            eps_d * std::pow(rng.uniform(), 1.0 / static_cast<double>(mu.size()));
        std::vector<double> x = mu;
        if (nd > 0.0)
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += radius * dir[i] / nd;
        const double est = lipschitz_power_iteration(model, x, iters, seed ^ p);
        if (est > best) best = est;
    }
    return best;
}

double margin_bound(const SafetyConfig& cfg) {
    cfg.validate();
    return cfg.lip_s * cfg.eps_d *
           std::pow(cfg.gamma_p, static_cast<double>(cfg.horizon) + 1.0);
}

double multiturn_bound(const SafetyConfig& cfg) {
    cfg.validate();
    double acc = 0.0;
    for (std::size_t tk : cfg.intervention_steps)
        acc += std::pow(cfg.gamma_p, static_cast<double>(cfg.horizon - tk));
    return cfg.lip_s * cfg.eps_d * acc;
}

RecursionTrace simulate_recursion(double gamma, double dm0, std::size_t horizon) {
    if (dm0 < 0.0) throw domain_error("simulate_recursion: dm0 must be nonnegative");
    if (gamma < 0.0) throw domain_error("simulate_recursion: gamma must be nonnegative");
    RecursionTrace out;
    out.trace.resize(horizon + 1);
    double v = dm0;
    for (std::size_t t = 0; t <= horizon; ++t) {
        out.trace[t] = v;
        v *= gamma;
    }
    out.klass = gamma < 1.0   ? RecursionClass::contraction
                : gamma > 1.0 ? RecursionClass::expansion
                              : RecursionClass::neutral;
    return out;
}

Allocation allocate_budget(double k_d, double k_p, double c_budget) {
    if (!(k_d > 0.0) || !(k_p > 0.0) || !(c_budget > 0.0))
        throw domain_error("allocate_budget: k_d, k_p, C_budget must be positive");
    Allocation a;
    a.eps_d_star = std::sqrt(k_d * c_budget / k_p);
    a.gamma_p_star = c_budget / a.eps_d_star;
    a.total_cost = k_d / a.eps_d_star + k_p / a.gamma_p_star;
    a.contraction_compatible = a.gamma_p_star < 1.0;
    return a;
}

ProductCheck check_product_constraint(double eps_d, double gamma_p, double c_budget,
                                      double lip_s, double s0, double tau_safe) {
    if (eps_d < 0.0 || gamma_p < 0.0 || c_budget < 0.0 || lip_s < 0.0)
        throw domain_error("check_product_constraint: inputs must be nonnegative");
    ProductCheck c;
    c.satisfied = eps_d * gamma_p <= c_budget;  // boundary inclusive
    c.certified_margin = s0 - lip_s * eps_d * gamma_p;
    c.margin_ok = c.certified_margin >= tau_safe;
    return c;
}

CascadeResult cascading_epsilon(const PrivacyBudget& budget) {
    budget.validate();
    return {budget.eps_d + budget.rho * budget.eps_p, budget.eps_d + budget.eps_p};
}

}  // namespace gradgeom::budgets
