#pragma once

#include <cstdint>
#include <vector>

#include "gradgeom/model.hpp"

namespace gradgeom::budgets {

struct SafetyConfig {
    double eps_d = 0.0;    // data-perturbation budget, > 0
    double gamma_p = 0.0;  // local Lipschitz bound, > 0
    double lip_s = 0.0;    // Lipschitz constant of the safety margin, >= 0
    double s0 = 0.0;       // baseline margin
    std::size_t horizon = 0;
    std::vector<std::size_t> intervention_steps;  // strictly increasing, within [0, T]

    void validate() const;
};

struct PrivacyBudget {
    double eps_d = 0.0;
    double eps_p = 0.0;
    double rho = 1.0;  // compression ratio in (0, 1]

    static PrivacyBudget from_dimensions(double eps_d, double eps_p, std::size_t m,
                                         std::size_t d);
    void validate() const;
};

// alternating VJP/JVP power iteration on the input Jacobian at x; Rayleigh
// estimate of sigma_max(J_x). Restarts from a derived seed when the iterate
// collapses; after 3 degenerate restarts the map is treated as zero.
double lipschitz_power_iteration(const Model& model, const std::vector<double>& x,
                                 std::size_t iters, std::uint64_t seed);

// max of the single-point estimate over seeded probes drawn in the ball of
// radius eps_d around the dataset mean input
double lipschitz_probe_max(const Model& model, const Dataset& data, double eps_d,
                           std::size_t probes, std::size_t iters, std::uint64_t seed);

// C * eps_d * gamma_p^(T+1)
double margin_bound(const SafetyConfig& cfg);

// C * eps_d * sum over interventions t_k of gamma_p^(T - t_k)
double multiturn_bound(const SafetyConfig& cfg);

enum class RecursionClass { contraction, neutral, expansion };

struct RecursionTrace {
    std::vector<double> trace;  // length T+1, trace[t] = dm0 * gamma^t
    RecursionClass klass = RecursionClass::neutral;
};

RecursionTrace simulate_recursion(double gamma, double dm0, std::size_t horizon);

struct Allocation {
    double eps_d_star = 0.0;
    double gamma_p_star = 0.0;
    double total_cost = 0.0;
    bool contraction_compatible = false;  // gamma* < 1
};

// minimize k_d/eps + k_p/gamma subject to eps * gamma = C_budget (closed form)
Allocation allocate_budget(double k_d, double k_p, double c_budget);

struct ProductCheck {
    bool satisfied = false;       // eps_d * gamma_p <= C_budget (inclusive)
    double certified_margin = 0.0;  // S0 - lip_S * eps_d * gamma_p
    bool margin_ok = false;         // certified_margin >= tau_safe
};

ProductCheck check_product_constraint(double eps_d, double gamma_p, double c_budget,
                                      double lip_s, double s0, double tau_safe);

struct CascadeResult {
    double cascaded = 0.0;  // eps_d + rho * eps_p
    double naive = 0.0;     // eps_d + eps_p
};

CascadeResult cascading_epsilon(const PrivacyBudget& budget);

}  // namespace gradgeom::budgets
