#include "gradgeom/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradgeom/budgets.hpp"
#include "gradgeom/composition.hpp"
#include "gradgeom/continual.hpp"
#include "gradgeom/errors.hpp"
#include "gradgeom/fisher.hpp"
#include "gradgeom/interaction.hpp"
#include "gradgeom/io.hpp"
#include "gradgeom/jacobian.hpp"
#include "gradgeom/rng.hpp"
#include "gradgeom/subspace.hpp"

namespace gradgeom::cli {

namespace {

using io::format_double;

std::string join_flags(const std::vector<std::string>& argv) {
    std::string s;
    for (std::size_t i = 0; i < argv.size(); ++i) s += (i ? " " : "") + argv[i];
    return s;
}

std::vector<std::size_t> parse_dims(const std::string& spec) {
    std::vector<std::size_t> dims;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const long v = std::stol(tok);
        if (v <= 0) throw domain_error("--dims: layer sizes must be positive");
        dims.push_back(static_cast<std::size_t>(v));
    }
    if (dims.size() < 2) throw domain_error("--dims: need at least two layer sizes");
    return dims;
}

std::vector<double> parse_vector(const std::string& spec, const char* flag) {
    std::vector<double> v;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw domain_error(std::string(flag) + ": bad number '" + tok + "'");
        }
    }
    return v;
}

Dataset teacher_dataset(const Matrix& w, const GenSpec& spec, Rng& rng) {
    Dataset d;
    d.loss_kind = LossKind::squared_error;
    for (std::size_t n = 0; n < spec.n; ++n) {
        Sample s;
        s.x = rng.normal_vector(spec.d_in);
        s.y = matvec(w, s.x);
        if (spec.noise_std > 0.0)
            for (auto& y : s.y) y += spec.noise_std * rng.normal();
        d.samples.push_back(std::move(s));
    }
    return d;
}

}  // namespace

std::pair<Dataset, Dataset> gen_task_pair(const GenSpec& spec, std::uint64_t seed) {
    if (spec.n < 1) throw domain_error("gen-data: --n must be >= 1");
    if (spec.delta < 0.0) throw domain_error("gen-data: --delta must be >= 0");

    Rng rng(seed);
    Matrix wa(spec.d_out, spec.d_in);
    const double scale = 1.0 / std::sqrt(static_cast<double>(spec.d_in));
    for (auto& v : wa.data) v = scale * rng.normal();
    Matrix wb = wa;
    for (auto& v : wb.data) v += spec.delta * scale * rng.normal();

    Rng rng_a = Rng::derived(seed, 0xA);
    Rng rng_b = Rng::derived(seed, 0xB);
    return {teacher_dataset(wa, spec, rng_a), teacher_dataset(wb, spec, rng_b)};
}

namespace {

struct CommonModelArgs {
    std::string checkpoint;  // stem of an existing checkpoint
    std::string dims;        // alternative: fresh seeded model
    std::string activation = "tanh";
    std::uint64_t init_seed = 1;
};

void add_model_options(CLI::App* cmd, CommonModelArgs& args) {
    cmd->add_option("--checkpoint", args.checkpoint, "checkpoint path stem to load");
    cmd->add_option("--dims", args.dims, "comma-separated layer sizes for a fresh model");
    cmd->add_option("--activation", args.activation, "tanh|identity")
        ->check(CLI::IsMember({"tanh", "identity"}));
    cmd->add_option("--init-seed", args.init_seed, "seed for fresh-model weights");
}

Model resolve_model(const CommonModelArgs& args) {
    if (!args.checkpoint.empty()) return io::load_checkpoint(args.checkpoint);
    if (args.dims.empty())
        throw domain_error("either --checkpoint or --dims is required");
    return Model::seeded(parse_dims(args.dims),
                         args.activation == "tanh" ? Activation::tanh
                                                   : Activation::identity,
                         args.init_seed);
}

int run_impl(const std::vector<std::string>& argv) {
    CLI::App app{"desk-scale gradient-geometry toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");
    const std::string invocation = join_flags(argv);

    auto provenance = [&](std::uint64_t seed) {
        return io::provenance_block(
            {{"invocation", invocation}, {"seed", std::to_string(seed)}});
    };

    // ---- gen-data ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic task pair");
    GenSpec spec;
    std::uint64_t gen_seed = 1;
    std::string gen_task = "shift";
    std::vector<std::string> gen_out;
    gen->add_option("--seed", gen_seed);
    gen->add_option("--task", gen_task)->check(CLI::IsMember({"shift"}));
    gen->add_option("--n", spec.n);
    gen->add_option("--din", spec.d_in);
    gen->add_option("--dout", spec.d_out);
    gen->add_option("--delta", spec.delta);
    gen->add_option("--noise", spec.noise_std);
    gen->add_option("--out", gen_out, "one or two output CSV paths")
        ->required()
        ->expected(1, 2);

    // ---- train -------------------------------------------------------------
    auto* train = app.add_subcommand("train", "gradient descent on a dataset");
    CommonModelArgs train_model;
    add_model_options(train, train_model);
    std::string train_data, train_out;
    continual::TrainOptions train_opts;
    train->add_option("--data", train_data)->required();
    train->add_option("--steps", train_opts.steps)->required();
    train->add_option("--alpha", train_opts.alpha);
    train->add_option("--seed", train_opts.seed);
    train->add_option("--out", train_out, "output checkpoint stem")->required();

    // ---- select ------------------------------------------------------------
    auto* select = app.add_subcommand("select", "gradient-interaction scoring");
    CommonModelArgs select_model;
    add_model_options(select, select_model);
    std::string sel_train, sel_val, sel_dir = ".";
    std::size_t sel_b = 1;
    double sel_rho = 1.0;
    select->add_option("--train-data", sel_train)->required();
    select->add_option("--val-data", sel_val)->required();
    select->add_option("--b", sel_b, "data budget")->required();
    select->add_option("--rho", sel_rho, "parameter budget ratio")->required();
    select->add_option("--out-dir", sel_dir);

    // ---- fisher ------------------------------------------------------------
    auto* fish = app.add_subcommand("fisher", "Fisher diagonal and diagnostics");
    CommonModelArgs fisher_model;
    add_model_options(fish, fisher_model);
    std::string fish_data, fish_ref, fish_dir = ".";
    std::size_t fish_m = 0;  // 0: exact
    std::uint64_t fish_seed = 1;
    fish->add_option("--data", fish_data)->required();
    fish->add_option("--ref-data", fish_ref, "clean reference for the trace ratio");
    fish->add_option("--m", fish_m, "sketch count; omit or 0 for the exact diagonal");
    fish->add_option("--seed", fish_seed);
    fish->add_option("--out-dir", fish_dir);

    // ---- subspace ----------------------------------------------------------
    auto* sub = app.add_subcommand("subspace", "gradient subspaces and angles");
    CommonModelArgs sub_model;
    add_model_options(sub, sub_model);
    std::string sub_demos, sub_basis_out, sub_a, sub_b, sub_angles_out;
    std::size_t sub_r = 1;
    sub->add_option("--demos", sub_demos, "demonstration CSV for subspace extraction");
    sub->add_option("--r", sub_r, "requested rank");
    sub->add_option("--basis-out", sub_basis_out, "output stem for the extracted basis");
    sub->add_option("--basis-a", sub_a, "first basis stem for angle comparison");
    sub->add_option("--basis-b", sub_b, "second basis stem");
    sub->add_option("--angles-out", sub_angles_out, "angles.csv path");

    // ---- duality -----------------------------------------------------------
    auto* dual = app.add_subcommand("duality", "output decomposition and realizations");
    CommonModelArgs dual_model;
    add_model_options(dual, dual_model);
    std::string dual_data, dual_target, dual_out;
    dual->add_option("--data", dual_data, "dataset; the first sample is used")->required();
    dual->add_option("--target", dual_target,
                     "comma-separated output target; default y - f(x)");
    dual->add_option("--out", dual_out, "report JSON path")->required();

    // ---- continual ---------------------------------------------------------
    auto* cont = app.add_subcommand("continual", "replay/EWC budget sweep");
    GenSpec cont_spec;
    cont_spec.delta = 1.0;
    std::uint64_t cont_seed = 1;
    std::string cont_k = "0,5,20", cont_lambda = "0,0.1,1", cont_out;
    std::string cont_dims;
    continual::SweepOptions sweep;
    bool cont_uniform = false;
    cont->add_option("--seed", cont_seed);
    cont->add_option("--n", cont_spec.n);
    cont->add_option("--din", cont_spec.d_in);
    cont->add_option("--dout", cont_spec.d_out);
    cont->add_option("--delta", cont_spec.delta);
    cont->add_option("--noise", cont_spec.noise_std);
    cont->add_option("--k-grid", cont_k);
    cont->add_option("--lambda-grid", cont_lambda);
    cont->add_option("--steps", sweep.steps);
    cont->add_option("--alpha", sweep.alpha);
    cont->add_option("--dims", cont_dims, "model layer sizes; default linear din,dout");
    cont->add_flag("--uniform-buffer", cont_uniform);
    cont->add_option("--out", cont_out, "sweep.csv path")->required();

    // ---- safety ------------------------------------------------------------
    auto* safety = app.add_subcommand("safety", "Lipschitz and margin arithmetic");
    CommonModelArgs safety_model;
    add_model_options(safety, safety_model);
    std::string safety_data, safety_out, safety_interventions = "0";
    std::size_t safety_iters = 100, safety_probes = 16, safety_horizon = 4;
    std::uint64_t safety_seed = 1;
    double safety_eps = 0.1, safety_c = 1.0, safety_kd = 1.0, safety_kp = 1.0;
    double safety_lip = 1.0, safety_s0 = 1.0, safety_tau = 0.0;
    safety->add_option("--data", safety_data, "probe-center dataset")->required();
    safety->add_option("--iters", safety_iters);
    safety->add_option("--probes", safety_probes);
    safety->add_option("--seed", safety_seed);
    safety->add_option("--eps-d", safety_eps);
    safety->add_option("--c-budget", safety_c);
    safety->add_option("--kd", safety_kd);
    safety->add_option("--kp", safety_kp);
    safety->add_option("--lip-s", safety_lip);
    safety->add_option("--s0", safety_s0);
    safety->add_option("--tau-safe", safety_tau);
    safety->add_option("--horizon", safety_horizon);
    safety->add_option("--interventions", safety_interventions);
    safety->add_option("--out", safety_out, "report JSON path")->required();

    // ---- privacy -----------------------------------------------------------
    auto* priv = app.add_subcommand("privacy", "cascading privacy arithmetic");
    double priv_eps_d = 0.0, priv_eps_p = 0.0, priv_rho = 1.0;
    std::string priv_out;
    priv->add_option("--eps-d", priv_eps_d)->required();
    priv->add_option("--eps-p", priv_eps_p)->required();
    priv->add_option("--rho", priv_rho)->required();
    priv->add_option("--out", priv_out, "report JSON path")->required();

    // ---- compose -----------------------------------------------------------
    auto* comp = app.add_subcommand("compose", "merge models / mix data / gap report");
    std::vector<std::string> comp_merge, comp_mix;
    std::string comp_weights, comp_base, comp_out;
    std::string comp_gap_family, comp_gap_thetas;
    std::size_t comp_n_out = 0;
    std::uint64_t comp_seed = 1;
    comp->add_option("--merge", comp_merge, "checkpoint stems to merge");
    comp->add_option("--mix", comp_mix, "CSV datasets to mix");
    comp->add_option("--weights", comp_weights, "comma-separated simplex weights");
    comp->add_option("--base", comp_base, "base checkpoint stem for merging");
    comp->add_option("--n-out", comp_n_out, "mixed sample count");
    comp->add_option("--seed", comp_seed);
    comp->add_option("--gap-family", comp_gap_family, "gaussian|categorical");
    comp->add_option("--gap-thetas", comp_gap_thetas,
                     "semicolon-separated natural-parameter vectors");
    comp->add_option("--out", comp_out, "output path or stem")->required();

    std::vector<const char*> cargv;
    cargv.reserve(argv.size());
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (gen->parsed()) {
        auto [a, b] = gen_task_pair(spec, gen_seed);
        io::save_dataset(a, gen_out.front(), provenance(gen_seed));
        if (gen_out.size() == 2) io::save_dataset(b, gen_out.back(), provenance(gen_seed));
        return 0;
    }

    if (train->parsed()) {
        const Model model = resolve_model(train_model);
        const Dataset data = io::load_dataset(train_data);
        const Model trained = continual::train_task(model, data, train_opts);
        io::save_checkpoint(trained, train_out);
        return 0;
    }

    if (select->parsed()) {
        const Model model = resolve_model(select_model);
        const Dataset tr = io::load_dataset(sel_train);
        const Dataset va = io::load_dataset(sel_val);
        const auto v = interaction::validation_gradient(model, va);
        const auto scores = interaction::streaming_scores(model, tr, v);
        const auto data_sel = interaction::select_data(scores, sel_b);
        const auto mask = interaction::select_params(scores, sel_rho);

        std::ostringstream sc;
        sc << provenance(0) << "kind,index,score\n";
        for (std::size_t i = 0; i < scores.phi_d.size(); ++i)
            sc << "data," << i << "," << format_double(scores.phi_d[i]) << "\n";
        for (std::size_t i = 0; i < scores.phi_p.size(); ++i)
            sc << "param," << i << "," << format_double(scores.phi_p[i]) << "\n";
        io::write_text_file(sel_dir + "/scores.csv", sc.str());

        std::ostringstream se;
        se << provenance(0) << "kind,index\n";
        for (auto i : data_sel) se << "data," << i << "\n";
        for (std::size_t i = 0; i < mask.size(); ++i)
            if (mask[i]) se << "param," << i << "\n";
        io::write_text_file(sel_dir + "/selection.csv", se.str());
        return 0;
    }

    if (fish->parsed()) {
        const Model model = resolve_model(fisher_model);
        const Dataset data = io::load_dataset(fish_data);
        if (fish->count("--m") && fish_m == 0)
            throw domain_error("fisher: --m must be >= 1 (one sketch minimum); "
                               "omit the flag for the exact diagonal");
        const fisher::FisherDiagonal diag =
            fish_m == 0 ? fisher::exact_fisher_diag(model, data)
                        : fisher::hutchinson_fisher_diag(model, data, fish_m, fish_seed);

        std::ostringstream fc;
        fc << provenance(fish_seed) << "index,f_hat,exact\n";
        for (std::size_t i = 0; i < diag.f_hat.size(); ++i)
            fc << i << "," << format_double(diag.f_hat[i]) << ","
               << (diag.exact ? 1 : 0) << "\n";
        io::write_text_file(fish_dir + "/fisher.csv", fc.str());

        const Dataset ref = fish_ref.empty() ? data : io::load_dataset(fish_ref);
        const fisher::FisherDiagonal exact = fisher::exact_fisher_diag(model, data);
        nlohmann::json j;
        j["trace_ratio"] = fisher::fisher_trace_ratio(model, data, ref);
        j["solidification_ratio"] = fisher::solidification_ratio(exact);
        io::write_text_file(fish_dir + "/diagnostics.json", j.dump(2) + "\n");
        return 0;
    }

    if (sub->parsed()) {
        if (!sub_demos.empty()) {
            const Model model = resolve_model(sub_model);
            const Dataset demos = io::load_dataset(sub_demos);
            const auto basis =
                subspace::icl_subspace(model, demos.samples, sub_r, demos.loss_kind);
            if (sub_basis_out.empty())
                throw domain_error("subspace: --basis-out is required with --demos");
            // basis checkpoint: metadata JSON + little-endian f64 sidecar
            nlohmann::json meta;
            meta["format_version"] = io::kFormatVersion;
            meta["rows"] = basis.basis.rows;
            meta["cols"] = basis.basis.cols;
            io::write_text_file(sub_basis_out + ".json", meta.dump(2) + "\n");
            std::ofstream bf(sub_basis_out + ".bin", std::ios::binary);
            if (!bf) throw io_error("cannot write basis sidecar " + sub_basis_out + ".bin");
            bf.write(reinterpret_cast<const char*>(basis.basis.data.data()),
                     static_cast<std::streamsize>(basis.basis.data.size() * 8));
        }
        if (!sub_a.empty() || !sub_b.empty()) {
            if (sub_a.empty() || sub_b.empty() || sub_angles_out.empty())
                throw domain_error(
                    "subspace: angle mode needs --basis-a, --basis-b and --angles-out");
            auto load_basis = [](const std::string& stem) {
                std::ifstream jf(stem + ".json");
                if (!jf) throw io_error("cannot read basis metadata " + stem + ".json");
                nlohmann::json meta;
                jf >> meta;
                Matrix m(meta.at("rows").get<std::size_t>(),
                         meta.at("cols").get<std::size_t>());
                std::ifstream bf(stem + ".bin", std::ios::binary);
                if (!bf ||
                    !bf.read(reinterpret_cast<char*>(m.data.data()),
                             static_cast<std::streamsize>(m.data.size() * 8)))
                    throw io_error("cannot read basis sidecar " + stem + ".bin");
                return subspace::make_basis(std::move(m), subspace::BasisOrigin::raw);
            };
            const auto angles =
                subspace::principal_angles(load_basis(sub_a), load_basis(sub_b));
            std::ostringstream ac;
            ac << provenance(0) << "index,angle_radians,cosine\n";
            for (std::size_t i = 0; i < angles.size(); ++i)
                ac << i << "," << format_double(angles[i]) << ","
                   << format_double(std::cos(angles[i])) << "\n";
            io::write_text_file(sub_angles_out, ac.str());
        }
        if (sub_demos.empty() && sub_a.empty())
            throw domain_error("subspace: nothing to do; pass --demos or --basis-a/-b");
        return 0;
    }

    if (dual->parsed()) {
        const Model model = resolve_model(dual_model);
        const Dataset data = io::load_dataset(dual_data);
        const Sample& s = data.samples.front();
        std::vector<double> target;
        if (!dual_target.empty()) {
            target = parse_vector(dual_target, "--target");
        } else {
            const auto out = model.forward(s.x);
            target.resize(out.size());
            for (std::size_t i = 0; i < out.size(); ++i) target[i] = s.y[i] - out[i];
        }
        const auto rx = jacobian::min_norm_data_realization(model, s.x, target);
        const auto rt = jacobian::min_norm_param_realization(model, s.x, target);
        const auto dec = jacobian::decompose(model, s.x, rx.perturbation,
                                             std::vector<double>(model.param_count(), 0.0));

        nlohmann::json j;
        j["target"] = target;
        j["data_realization"] = {{"norm", norm2(rx.perturbation)},
                                 {"residual", rx.residual_norm},
                                 {"out_of_image", rx.out_of_image}};
        j["param_realization"] = {{"norm", norm2(rt.perturbation)},
                                  {"residual", rt.residual_norm},
                                  {"out_of_image", rt.out_of_image}};
        j["decomposition"] = {{"data_term", dec.data_term},
                              {"param_term", dec.param_term},
                              {"linearization_error", dec.linearization_error}};
        io::write_text_file(dual_out, j.dump(2) + "\n");
        return 0;
    }

    if (cont->parsed()) {
        auto [task_a, task_b] = gen_task_pair(cont_spec, cont_seed);
        const auto dims = cont_dims.empty()
                              ? std::vector<std::size_t>{cont_spec.d_in, cont_spec.d_out}
                              : parse_dims(cont_dims);
        const Model init = Model::seeded(dims, Activation::identity, cont_seed);
        for (double k : parse_vector(cont_k, "--k-grid"))
            sweep.k_grid.push_back(static_cast<std::size_t>(k));
        sweep.lambda_grid = parse_vector(cont_lambda, "--lambda-grid");
        sweep.seeds = {cont_seed};
        sweep.uniform_buffer = cont_uniform;
        const auto records = continual::budget_sweep(init, task_a, task_b, sweep);

        std::ostringstream sc;
        sc << provenance(cont_seed) << "k,lambda,forgetting,new_loss,seed\n";
        for (const auto& r : records)
            sc << r.k << "," << format_double(r.lambda) << ","
               << format_double(r.forgetting) << "," << format_double(r.new_loss) << ","
               << r.seed << "\n";
        io::write_text_file(cont_out, sc.str());
        return 0;
    }

    if (safety->parsed()) {
        const Model model = resolve_model(safety_model);
        const Dataset data = io::load_dataset(safety_data);
        const double gamma = budgets::lipschitz_probe_max(
            model, data, safety_eps, safety_probes, safety_iters, safety_seed);

        budgets::SafetyConfig cfg;
        cfg.eps_d = safety_eps;
        cfg.gamma_p = gamma > 0.0 ? gamma : 1e-300;
        cfg.lip_s = safety_lip;
        cfg.s0 = safety_s0;
        cfg.horizon = safety_horizon;
        for (double t : parse_vector(safety_interventions, "--interventions"))
            cfg.intervention_steps.push_back(static_cast<std::size_t>(t));

        const auto alloc = budgets::allocate_budget(safety_kd, safety_kp, safety_c);
        const auto check = budgets::check_product_constraint(
            safety_eps, gamma, safety_c, safety_lip, safety_s0, safety_tau);

        nlohmann::json j;
        j["gamma_hat"] = gamma;
        j["margin_bound"] = budgets::margin_bound(cfg);
        j["multiturn_bound"] = budgets::multiturn_bound(cfg);
        j["allocation"] = {{"eps_d_star", alloc.eps_d_star},
                           {"gamma_p_star", alloc.gamma_p_star},
                           {"total_cost", alloc.total_cost},
                           {"contraction_compatible", alloc.contraction_compatible}};
        j["product_constraint"] = {{"satisfied", check.satisfied},
                                   {"certified_margin", check.certified_margin},
                                   {"margin_ok", check.margin_ok}};
        io::write_text_file(safety_out, j.dump(2) + "\n");
        return 0;
    }

    if (priv->parsed()) {
        budgets::PrivacyBudget b;
        b.eps_d = priv_eps_d;
        b.eps_p = priv_eps_p;
        b.rho = priv_rho;
        const auto r = budgets::cascading_epsilon(b);
        nlohmann::json j;
        j["cascaded"] = r.cascaded;
        j["naive"] = r.naive;
        io::write_text_file(priv_out, j.dump(2) + "\n");
        return 0;
    }

    if (comp->parsed()) {
        if (!comp_merge.empty()) {
            if (comp_base.empty())
                throw domain_error("compose: --base is required with --merge");
            composition::MixtureWeights w{parse_vector(comp_weights, "--weights")};
            std::vector<Model> models;
            for (const auto& stem : comp_merge) models.push_back(io::load_checkpoint(stem));
            const Model base = io::load_checkpoint(comp_base);
            io::save_checkpoint(composition::merge_models(models, w, base), comp_out);
            return 0;
        }
        if (!comp_mix.empty()) {
            composition::MixtureWeights w{parse_vector(comp_weights, "--weights")};
            std::vector<Dataset> sets;
            for (const auto& p : comp_mix) sets.push_back(io::load_dataset(p));
            if (comp_n_out == 0) throw domain_error("compose: --n-out must be >= 1");
            const Dataset mixed =
                composition::mix_datasets(sets, w, comp_n_out, comp_seed);
            io::save_dataset(mixed, comp_out, provenance(comp_seed));
            return 0;
        }
        if (!comp_gap_family.empty()) {
            composition::ExpFamily fam;
            std::vector<std::vector<double>> thetas;
            std::stringstream ss(comp_gap_thetas);
            std::string tok;
            while (std::getline(ss, tok, ';'))
                thetas.push_back(parse_vector(tok, "--gap-thetas"));
            if (thetas.empty()) throw domain_error("compose: --gap-thetas is empty");
            if (comp_gap_family == "gaussian") {
                fam.kind = composition::FamilyKind::gaussian_fixed_var;
                fam.dim = thetas.front().size();
            } else if (comp_gap_family == "categorical") {
                fam.kind = composition::FamilyKind::categorical;
                fam.dim = thetas.front().size() + 1;
            } else {
                throw domain_error("compose: --gap-family must be gaussian or categorical");
            }
            composition::MixtureWeights w{parse_vector(comp_weights, "--weights")};
            nlohmann::json j;
            j["family"] = comp_gap_family;
            j["gap"] = composition::duality_gap(fam, thetas, w);
            io::write_text_file(comp_out, j.dump(2) + "\n");
            return 0;
        }
        throw domain_error("compose: pass one of --merge, --mix, --gap-family");
    }

    return 0;
}

}  // namespace

int run(const std::vector<std::string>& argv) {
    try {
        return run_impl(argv);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args);
}

}  // namespace gradgeom::cli
