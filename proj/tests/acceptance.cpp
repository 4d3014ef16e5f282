// Acceptance harness: one line of output per criterion, nonzero exit when any
// criterion fails. Each check is oracle- or property-based and self-contained.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gradgeom/budgets.hpp"
#include "gradgeom/cli.hpp"
#include "gradgeom/composition.hpp"
#include "gradgeom/continual.hpp"
#include "gradgeom/fisher.hpp"
#include "gradgeom/interaction.hpp"
#include "gradgeom/jacobian.hpp"
#include "gradgeom/matrix.hpp"
#include "gradgeom/model.hpp"
#include "gradgeom/rng.hpp"
#include "gradgeom/subspace.hpp"
#include "oracles.hpp"

using namespace gradgeom;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::printf("[%2d] %-28s %s  %s\n", index, name, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

Dataset random_dataset(std::size_t n, std::size_t din, std::size_t dout,
                       std::uint64_t seed) {
    Dataset d;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i)
        d.samples.push_back({rng.normal_vector(din), rng.normal_vector(dout), -1});
    return d;
}

// ---------------------------------------------------------------------------
// 1: forward/reverse consistency and gradient correctness on 50 seeded nets

void criterion_autodiff() {
    double worst_adjoint = 0.0, worst_grad = 0.0;
    bool pass = true;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const std::vector<std::size_t> dims =
            seed % 3 == 0 ? std::vector<std::size_t>{5, 16, 16, 3}
            : seed % 3 == 1 ? std::vector<std::size_t>{4, 30, 2}
                            : std::vector<std::size_t>{8, 12, 9, 4};
        const Model m = Model::seeded(dims, Activation::tanh, seed);
        Rng rng(1000 + seed);
        const auto x = rng.normal_vector(m.input_dim());
        const auto u = rng.normal_vector(m.output_dim());
        const auto vi = rng.normal_vector(m.input_dim());
        const auto vp = rng.normal_vector(m.param_count());

        const double lhs_i = dot(u, m.jvp_input(x, vi));
        const double rhs_i = dot(m.vjp_input(x, u), vi);
        const double lhs_p = dot(u, m.jvp_param(x, vp));
        const double rhs_p = dot(m.vjp_param(x, u), vp);
        worst_adjoint = std::max({worst_adjoint, std::fabs(lhs_i - rhs_i),
                                  std::fabs(lhs_p - rhs_p)});

        Sample s;
        s.x = x;
        s.y = rng.normal_vector(m.output_dim());
        const auto g = m.grad_theta(s, LossKind::squared_error);
        const auto fd = oracles::fd_gradient([&](const std::vector<double>& th) {
            Model mm = m;
            mm.set_theta(th);
            return mm.loss(s, LossKind::squared_error);
        }, m.theta());
        const double rel = oracles::max_abs_diff(g, fd) / (1.0 + norm2(g));
        worst_grad = std::max(worst_grad, rel);
    }
    pass = worst_adjoint <= 1e-10 && worst_grad < 1e-6;
    char buf[128];
    std::snprintf(buf, sizeof buf, "(max adjoint defect %.2e, max FD rel err %.2e)",
                  worst_adjoint, worst_grad);
    report(1, "autodiff soundness", pass, buf);
}

// ---------------------------------------------------------------------------
// 2: streaming scores equal the dense-oracle row/column sums; O(K) memory

std::size_t g_max_alloc = 0;
void track_alloc(std::size_t n) { g_max_alloc = std::max(g_max_alloc, n); }

void criterion_streaming() {
    double worst = 0.0;
    bool mem_ok = true;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 40 + 8 * (seed % 5);
        const Model m = Model::seeded({5, 9, 3}, Activation::tanh, seed);
        const Dataset d = random_dataset(n, 5, 3, 100 + seed);
        Rng rng(200 + seed);
        const auto v = rng.normal_vector(m.param_count());

        g_max_alloc = 0;
        interaction::set_alloc_hook(track_alloc);
        const auto s = interaction::streaming_scores(m, d, v);
        interaction::set_alloc_hook(nullptr);
        if (g_max_alloc >= n * m.param_count()) mem_ok = false;

        const Matrix big = interaction::materialize_M(m, d, v);
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m.param_count(); ++j) row += big(i, j);
            worst = std::max(worst, std::fabs(s.phi_d[i] - row));
        }
        for (std::size_t j = 0; j < m.param_count(); ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += big(i, j);
            worst = std::max(worst, std::fabs(s.phi_p[j] - col));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "(max score deviation %.2e, peak buffer %s N*K)",
                  worst, mem_ok ? "<" : ">=");
    report(2, "streaming score oracle", worst <= 1e-10 && mem_ok, buf);
}

// ---------------------------------------------------------------------------
// 3: sketched Fisher diagonal is unbiased with O(1/m) variance

void criterion_sketched_fisher() {
    const Model m = Model::seeded({3, 4, 2}, Activation::tanh, 1);
    const Dataset d = random_dataset(20, 3, 2, 2);
    const auto exact = fisher::exact_fisher_diag(m, d);
    const std::size_t kk = m.param_count();

    const int runs = 200;
    std::vector<double> mean(kk, 0.0), sq(kk, 0.0);
    for (int r = 0; r < runs; ++r) {
        const auto f = fisher::hutchinson_fisher_diag(m, d, 50, 1000 + r);
        for (std::size_t k = 0; k < kk; ++k) {
            mean[k] += f.f_hat[k] / runs;
            sq[k] += f.f_hat[k] * f.f_hat[k] / runs;
        }
    }
    double worst_z = 0.0;
    for (std::size_t k = 0; k < kk; ++k) {
        const double var = std::max(sq[k] - mean[k] * mean[k], 0.0);
        const double se = std::sqrt(var / runs);
        if (se > 0.0)
            worst_z = std::max(worst_z, std::fabs(mean[k] - exact.f_hat[k]) / se);
    }

    auto total_variance = [&](std::size_t sketches, std::uint64_t base) {
        const int rr = 100;
        std::vector<double> mu(kk, 0.0), s2(kk, 0.0);
        for (int r = 0; r < rr; ++r) {
            const auto f = fisher::hutchinson_fisher_diag(m, d, sketches, base + r);
            for (std::size_t k = 0; k < kk; ++k) {
                mu[k] += f.f_hat[k] / rr;
                s2[k] += f.f_hat[k] * f.f_hat[k] / rr;
            }
        }
        double tot = 0.0;
        for (std::size_t k = 0; k < kk; ++k) tot += std::max(s2[k] - mu[k] * mu[k], 0.0);
        return tot;
    };
    const double ratio = total_variance(400, 90000) / total_variance(100, 50000);

    char buf[128];
    std::snprintf(buf, sizeof buf, "(max |z| %.2f, var ratio 400/100 = %.3f)",
                  worst_z, ratio);
    report(3, "sketched Fisher statistics", worst_z <= 4.0 && ratio <= 0.35, buf);
}

// ---------------------------------------------------------------------------
// 4: power-iteration Lipschitz estimate vs dense SVD oracle

void criterion_power_iteration() {
    int found = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; found < 20 && seed < 400; ++seed) {
        const Model m = Model::seeded({4, 6, 3}, Activation::tanh, seed);
        Rng rng(300 + seed);
        const auto x = rng.normal_vector(4);
        const auto sv = oracles::singular_values(m.full_jacobian_input(x));
        if (sv[1] <= 0.0 || sv[0] / sv[1] < 1.05) continue;  // needs a spectral gap
        ++found;
        const double est = budgets::lipschitz_power_iteration(m, x, 200, 7);
        worst = std::max(worst, std::fabs(est - sv[0]));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%d gapped nets, max |est - sigma_max| %.2e)",
                  found, worst);
    report(4, "power-iteration accuracy", found == 20 && worst <= 1e-6, buf);
}

// ---------------------------------------------------------------------------
// 5: principal-angle identities and SVD reconstruction vs the Gram oracle

void criterion_subspaces() {
    using namespace subspace;
    bool pass = true;
    std::string detail;

    Matrix e12(6, 2), e34(6, 2);
    e12(0, 0) = 1.0;
    e12(1, 1) = 1.0;
    e34(2, 0) = 1.0;
    e34(3, 1) = 1.0;
    const auto b12 = make_basis(e12, BasisOrigin::raw);
    const auto b34 = make_basis(e34, BasisOrigin::raw);
    const auto self = principal_angles(b12, b12);
    const auto orth = principal_angles(b12, b34);
    for (double a : self) pass &= std::fabs(a) <= 1e-10;
    for (double a : orth) pass &= std::fabs(a - M_PI / 2) <= 1e-10;

    // rotation invariance: angles are unchanged under a shared orthogonal map
    Matrix g(6, 6);
    Rng rng(11);
    for (auto& v : g.data) v = rng.normal();
    const Matrix q = householder_qr(g).q;
    const auto rot = [&](const Matrix& b) {
        return make_basis(matmul(q, b), BasisOrigin::raw);
    };
    // both angles bounded away from 0 and pi/2, where arccos is well-conditioned
    Matrix mixed(6, 2);
    mixed(0, 0) = std::cos(0.3);
    mixed(2, 0) = std::sin(0.3);
    mixed(1, 1) = std::cos(0.6);
    mixed(4, 1) = std::sin(0.6);
    const auto bm = make_basis(mixed, BasisOrigin::raw);
    const auto before = principal_angles(b12, bm);
    const auto after = principal_angles(rot(b12.basis), rot(bm.basis));
    for (std::size_t i = 0; i < before.size(); ++i)
        pass &= std::fabs(before[i] - after[i]) <= 1e-10;

    double worst_rec = 0.0, worst_sigma = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const std::size_t rows = 5 + seed % 7, cols = 3 + seed % 5;
        Matrix mat(rows, cols);
        Rng r2(400 + seed);
        for (auto& v : mat.data) v = r2.normal();
        const auto svd = thin_svd(mat);
        Matrix us = svd.u;
        for (std::size_t i = 0; i < us.rows; ++i)
            for (std::size_t j = 0; j < us.cols; ++j) us(i, j) *= svd.sigma[j];
        const Matrix rec = matmul(us, transpose(svd.v));
        Matrix diff = rec;
        for (std::size_t i = 0; i < diff.data.size(); ++i) diff.data[i] -= mat.data[i];
        worst_rec = std::max(worst_rec, frobenius_norm(diff) / frobenius_norm(mat));
        const auto ref = oracles::singular_values(mat);
        for (std::size_t i = 0; i < svd.sigma.size(); ++i)
            worst_sigma = std::max(worst_sigma, std::fabs(svd.sigma[i] - ref[i]));
    }
    pass &= worst_rec <= 1e-9;
    pass &= worst_sigma <= 1e-9;

    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "(max rel reconstruction %.2e, max sigma dev %.2e)", worst_rec,
                  worst_sigma);
    report(5, "subspace suite", pass, buf);
}

// ---------------------------------------------------------------------------
// 6: closed-form safety arithmetic, 12 hand cases + KKT optimality

void criterion_safety() {
    using namespace budgets;
    bool pass = true;
    int cases = 0;
    auto expect = [&](double got, double want) {
        ++cases;
        if (got != want) pass = false;
    };

    auto mb = [](double lip, double eps, double g, std::size_t t) {
        SafetyConfig c;
        c.lip_s = lip;
        c.eps_d = eps;
        c.gamma_p = g;
        c.horizon = t;
        return margin_bound(c);
    };
    expect(mb(2.0, 0.1, 0.5, 3), 2.0 * 0.1 * 0.0625);            // 1
    expect(mb(1.0, 0.2, 0.5, 4), 0.2 * 0.03125);                 // 2: 0.00625
    expect(mb(2.0, 0.1, 1.0, 50), 2.0 * 0.1);                    // 3
    expect(mb(1.0, 1.0, 1.1, 1), std::pow(1.1, 2.0));            // 4
    expect(mb(0.0, 1.0, 0.5, 2), 0.0);                           // 5
    expect(mb(1.0, 1.0, 0.5, 0), 0.5);                           // 6

    auto mt = [](double lip, double eps, double g, std::size_t t,
                 std::vector<std::size_t> steps) {
        SafetyConfig c;
        c.lip_s = lip;
        c.eps_d = eps;
        c.gamma_p = g;
        c.horizon = t;
        c.intervention_steps = std::move(steps);
        return multiturn_bound(c);
    };
    expect(mt(1.0, 1.0, 0.5, 20, {20}), 1.0);                    // 7
    expect(mt(1.0, 1.0, 0.5, 20, {18, 19, 20}), 1.75);           // 8
    expect(mt(2.0, 0.25, 1.0, 5, {1, 3}), 1.0);                  // 9

    const auto con = simulate_recursion(0.5, 8.0, 3);            // 10
    ++cases;
    if (con.trace != std::vector<double>{8.0, 4.0, 2.0, 1.0} ||
        con.klass != RecursionClass::contraction)
        pass = false;
    const auto neu = simulate_recursion(1.0, 2.0, 4);            // 11
    ++cases;
    if (neu.trace != std::vector<double>(5, 2.0) || neu.klass != RecursionClass::neutral)
        pass = false;
    const auto exp = simulate_recursion(1.1, 1.0, 2);            // 12
    ++cases;
    if (exp.trace[2] != 1.1 * 1.1 || exp.klass != RecursionClass::expansion)
        pass = false;

    const double kd = 2.0, kp = 8.0, c = 0.5;
    const auto a = allocate_budget(kd, kp, c);
    double grid_best = 1e300;
    for (int i = 1; i <= 200000; ++i) {
        const double eps = 1e-4 * i;
        grid_best = std::min(grid_best, kd / eps + kp * eps / c);
    }
    const double kkt = std::fabs(kd / a.eps_d_star - kp / a.gamma_p_star);
    pass &= a.total_cost <= grid_best + 1e-12;
    pass &= kkt <= 1e-12 * (kd / a.eps_d_star);

    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "(%d/12 hand cases, cost %.6f vs grid %.6f, KKT gap %.1e)", cases,
                  a.total_cost, grid_best, kkt);
    report(6, "safety arithmetic", pass && cases == 12, buf);
}

// ---------------------------------------------------------------------------
// 7: cascading privacy never exceeds naive composition

void criterion_privacy() {
    using namespace budgets;
    bool pass = true;
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        PrivacyBudget b;
        b.eps_d = rng.uniform(0.0, 2.0);
        b.eps_p = rng.uniform(0.0, 2.0);
        b.rho = rng.uniform(1e-6, 1.0);
        const auto r = cascading_epsilon(b);
        if (!(r.cascaded <= r.naive)) pass = false;

        PrivacyBudget full = b;
        full.rho = 1.0;
        const auto fr = cascading_epsilon(full);
        if (fr.cascaded != fr.naive) pass = false;

        PrivacyBudget nop = b;
        nop.eps_p = 0.0;
        const auto nr = cascading_epsilon(nop);
        if (nr.cascaded != nr.naive) pass = false;
    }
    report(7, "privacy arithmetic", pass, "(1000-point sweep + equality edges)");
}

// ---------------------------------------------------------------------------
// 8: Legendre/Bregman duality and exact single-model task arithmetic

void criterion_composition() {
    using namespace composition;
    const ExpFamily fam{FamilyKind::categorical, 5};
    double worst_rt = 0.0, worst_dual = 0.0, worst_gap = 0.0;
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto t1 = rng.normal_vector(fam.theta_dim());
        const auto t2 = rng.normal_vector(fam.theta_dim());
        worst_rt = std::max(worst_rt,
                            oracles::max_abs_diff(to_theta(fam, to_eta(fam, t1)), t1));
        // Bregman duality: divergence in theta equals the flipped one in eta
        const double dpsi = bregman_psi(fam, t1, t2);
        const double dphi = bregman_phi(fam, to_eta(fam, t2), to_eta(fam, t1));
        worst_dual = std::max(worst_dual, std::fabs(dpsi - dphi));
    }
    const ExpFamily gauss{FamilyKind::gaussian_fixed_var, 4};
    const MixtureWeights half{{0.5, 0.5}};
    for (int i = 0; i < 20; ++i) {
        const auto t1 = rng.normal_vector(4);
        const auto t2 = rng.normal_vector(4);
        worst_gap = std::max(worst_gap, duality_gap(gauss, {t1, t2}, half));
    }

    // task arithmetic with a unit weight vector returns that model exactly
    bool exact_pick = true;
    std::vector<Model> models;
    for (std::uint64_t s = 1; s <= 3; ++s)
        models.push_back(Model::seeded({3, 4, 2}, Activation::tanh, s));
    const Model base = Model::seeded({3, 4, 2}, Activation::tanh, 9);
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> w(3, 0.0);
        w[i] = 1.0;
        const Model picked = merge_models(models, MixtureWeights{w}, base);
        if (picked.theta() != models[i].theta()) exact_pick = false;
    }

    const bool pass = worst_rt <= 1e-12 && worst_dual <= 1e-10 &&
                      worst_gap <= 1e-12 && exact_pick;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "(round trip %.1e, duality %.1e, gaussian gap %.1e, pick %s)",
                  worst_rt, worst_dual, worst_gap, exact_pick ? "exact" : "INEXACT");
    report(8, "composition duality", pass, buf);
}

// ---------------------------------------------------------------------------
// 9: replay/penalty budget sweep shows the expected forgetting trends

void criterion_continual() {
    cli::GenSpec gs;
    gs.n = 200;
    gs.d_in = 8;
    gs.d_out = 4;
    gs.delta = 1.0;
    auto [task_a, task_b] = cli::gen_task_pair(gs, 7);

    continual::SweepOptions opts;
    opts.k_grid = {0, 5, 20, 80, 200};
    opts.lambda_grid = {0.0, 0.1, 1.0, 10.0};
    opts.steps = 200;
    opts.alpha = 0.05;
    opts.seeds = {1};
    const Model init = Model::seeded({8, 4}, Activation::identity, 7);
    const auto rows = continual::budget_sweep(init, task_a, task_b, opts);

    auto cell = [&](std::size_t k, double lambda) {
        for (const auto& r : rows)
            if (r.k == k && r.lambda == lambda) return r.forgetting;
        return 1e300;
    };

    const double naive = cell(0, 0.0);
    bool max_at_origin = true;
    for (const auto& r : rows)
        if (r.forgetting > naive + 1e-12) max_at_origin = false;

    auto inversions = [](const std::vector<double>& f) {
        int inv = 0;
        for (std::size_t i = 1; i < f.size(); ++i)
            if (f[i] > f[i - 1] + 1e-12) ++inv;
        return inv;
    };
    std::vector<double> along_k, along_lambda;
    for (std::size_t k : opts.k_grid) along_k.push_back(cell(k, 0.0));
    for (double l : opts.lambda_grid) along_lambda.push_back(cell(0, l));
    const int inv_k = inversions(along_k);
    const int inv_l = inversions(along_lambda);

    // substitution table for the replay-vs-penalty tradeoff (reported only)
    std::printf("     k\\lambda      0       0.1       1        10      k*lambda(max)\n");
    for (std::size_t k : opts.k_grid) {
        std::printf("     %3zu    ", k);
        for (double l : opts.lambda_grid) std::printf(" %8.5f", cell(k, l));
        std::printf("   %8.1f\n", static_cast<double>(k) * 10.0);
    }

    const bool pass = max_at_origin && inv_k <= 1 && inv_l <= 1;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "(origin max %s, inversions k-row %d, lambda-row %d)",
                  max_at_origin ? "yes" : "NO", inv_k, inv_l);
    report(9, "continual-learning trends", pass, buf);
}

// ---------------------------------------------------------------------------
// 10: null-direction input edits vanish to first order (slope-2 law)

void criterion_null_space() {
    double worst_slope_dev = 0.0;
    int used = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Model m = Model::seeded({6, 8, 3}, Activation::tanh, seed);
        Rng rng(500 + seed);
        const auto x = rng.normal_vector(6);
        const auto n = jacobian::null_project_input(m, x, rng.normal_vector(6));
        if (norm2(n) < 1e-8) continue;
        ++used;
        const auto y0 = m.forward(x);
        std::vector<double> lx, ly;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            std::vector<double> xp = x;
            for (std::size_t i = 0; i < xp.size(); ++i) xp[i] += eps * n[i];
            const auto y = m.forward(xp);
            double d = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double dd = y[i] - y0[i];
                d += dd * dd;
            }
            lx.push_back(std::log10(eps));
            ly.push_back(0.5 * std::log10(d));
        }
        // least-squares slope over the three decades
        double mx = 0.0, my = 0.0;
        for (int i = 0; i < 3; ++i) {
            mx += lx[i] / 3.0;
            my += ly[i] / 3.0;
        }
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        worst_slope_dev = std::max(worst_slope_dev, std::fabs(num / den - 2.0));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%d nets, max |slope - 2| = %.3f)", used,
                  worst_slope_dev);
    report(10, "null-space quadratic law", used == 10 && worst_slope_dev <= 0.1, buf);
}

// ---------------------------------------------------------------------------
// 11: Monte-Carlo noisy-input loss vs the closed-form quadratic penalty

void criterion_augmentation() {
    const double sigma = 1e-2;
    const int draws = 100000;
    double worst_z = 0.0;
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Model m = Model::seeded({4, 6, 2}, Activation::tanh, seed);
        Rng rng(600 + seed);
        Sample s;
        s.x = rng.normal_vector(4);
        s.y = rng.normal_vector(2);

        Matrix cov = Matrix::identity(4);
        for (auto& v : cov.data) v *= sigma * sigma;
        const double reg =
            jacobian::augmentation_regularizer(m, s, LossKind::squared_error, cov);
        const double clean = m.loss(s, LossKind::squared_error);

        Rng mc(700 + seed);
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < draws; ++i) {
            Sample p = s;
            for (auto& xi : p.x) xi += sigma * mc.normal();
            const double l = m.loss(p, LossKind::squared_error);
            sum += l;
            sq += l * l;
        }
        const double mean = sum / draws;
        const double se = std::sqrt((sq / draws - mean * mean) / draws);
        const double z = std::fabs(mean - clean - reg) / se;
        worst_z = std::max(worst_z, z);
        if (z <= 3.0) ++within;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%d/10 samples within 3 SE, max |z| = %.2f)",
                  within, worst_z);
    report(11, "noise-vs-penalty equivalence", within == 10, buf);
}

}  // namespace

int main() {
    criterion_autodiff();
    criterion_streaming();
    criterion_sketched_fisher();
    criterion_power_iteration();
    criterion_subspaces();
    criterion_safety();
    criterion_privacy();
    criterion_composition();
    criterion_continual();
    criterion_null_space();
    criterion_augmentation();
    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
