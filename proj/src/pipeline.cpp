#include "lipdp/pipeline.hpp"

#include <filesystem>
#include <iostream>

#include "lipdp/report.hpp"

namespace lipdp {

namespace {

namespace fs = std::filesystem;

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    return dir;
}

struct SolvedInstance {
    FinanceInstance instance;
    std::vector<double> h_u;
    DpSolution solution;

    /// Optimal expected utility from the configured initial allocation.
    double initial_value(const RunConfig& cfg) const {
        return solution.values.front()(
            Eigen::Vector2d(cfg.market.initial_stock, cfg.market.initial_bond));
    }
};

SolvedInstance solve_instance(const RunConfig& cfg) {
    FinanceInstance instance = build_stage_models(cfg.market, cfg.utility, cfg.constraint);
    std::vector<double> h_u = control_meshes(cfg, instance.constants);
    DpSolution solution = backward_induct(instance.stages, instance.terminal_space,
                                          instance.utility, cfg.h_x, h_u, cfg.threads);
    return {std::move(instance), std::move(h_u), std::move(solution)};
}

void write_stage_tables(const fs::path& dir, const SolvedInstance& run) {
    const std::size_t horizon = run.instance.stages.size();
    for (std::size_t k = 0; k <= horizon; ++k) {
        const ValueFunction& vf = run.solution.values[k];
        const bool has_policy = k < horizon;
        CsvWriter csv(has_policy ? std::vector<std::string>{"S", "B", "J", "u", "v"}
                                 : std::vector<std::string>{"S", "B", "J"});
        for (const Eigen::Index flat : vf.inside_nodes()) {
            const Eigen::VectorXd x = vf.node(flat);
            if (has_policy) {
                const Eigen::Vector2d& u = run.solution.policies[k][static_cast<std::size_t>(flat)];
                csv.row({x[0], x[1], vf.value(flat), u[0], u[1]});
            } else {
                csv.row({x[0], x[1], vf.value(flat)});
            }
        }
        write_text_file((dir / ("value_stage_" + std::to_string(k) + ".csv")).string(),
                        csv.str());
    }
}

void write_instance_block(TreeWriter& tree, const RunConfig& cfg,
                          const SolvedInstance& run) {
    tree.open("instance");
    tree.kv("problem", cfg.problem);
    tree.kv("constraint", cfg.constraint == ConstraintVariant::Regulatory
                              ? std::string("regulatory")
                              : std::string("state-free"));
    tree.kv("horizon", cfg.market.horizon);
    tree.kv("cost_stock", cfg.market.cost_stock);
    tree.kv("cost_bond", cfg.market.cost_bond);
    tree.kv("riskless_floor", cfg.market.riskless_floor);
    tree.kv("state_floor0", cfg.market.state_floor0);
    tree.kv("wealth_cap0", cfg.market.wealth_cap0);
    tree.kv("initial_stock", cfg.market.initial_stock);
    tree.kv("initial_bond", cfg.market.initial_bond);
    tree.kv("utility", cfg.utility.kind == Utility::Linear   ? std::string("linear")
                       : cfg.utility.kind == Utility::Capped ? std::string("capped")
                                                             : std::string("zero"));
    tree.kv("utility_lip", run.instance.utility_lip);
    tree.kv("hx", cfg.h_x);
    for (std::size_t k = 0; k < run.h_u.size(); ++k)
        tree.kv("hu_stage_" + std::to_string(k), run.h_u[k]);
    tree.kv("probe_pairs", cfg.probe_pairs);
    tree.kv("slack_factor", cfg.slack_factor);
    tree.kv("seed", cfg.seed);
    tree.kv("initial_value", run.initial_value(cfg));
    // The floor recursion takes the minimum over the joint yield support;
    // this is the conservative branch that keeps the lower bound valid.
    tree.kv("floor_recursion", std::string("min-over-joint-support"));
    tree.close();
}

}  // namespace

void run_solve(const RunConfig& cfg) {
    validate(cfg);
    const fs::path dir = ensure_out_dir(cfg);
    const SolvedInstance run = solve_instance(cfg);
    write_stage_tables(dir, run);
    std::cout << "value at (" << cfg.market.initial_stock << ", "
              << cfg.market.initial_bond << ") = " << format_double(run.initial_value(cfg))
              << "\n";
}

CertifyOutcome run_certify(const RunConfig& cfg) {
    validate(cfg);
    const fs::path dir = ensure_out_dir(cfg);
    const SolvedInstance run = solve_instance(cfg);
    const std::size_t horizon = run.instance.stages.size();

    // Regularity constants: closed forms for the regulatory instance, sampled
    // estimates (flagged empirical) otherwise.
    std::vector<TauInput> taus(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        if (cfg.constraint == ConstraintVariant::Regulatory) {
            taus[k] = {run.instance.constants.stages[k].tau(), false};
        } else {
            taus[k] = {tau_estimate(run.instance.stages[k].constraints,
                                    run.instance.stages[k].manifold,
                                    run.instance.stages[k].state_space, 4.0 * cfg.h_x,
                                    run.h_u[k]),
                       true};
        }
    }

    CertifyOutcome outcome;
    outcome.certificate = certify(run.instance.stages, run.solution,
                                  run.instance.utility_lip, taus, cfg.slack_factor,
                                  run.h_u, cfg.seed);

    outcome.probes.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        SplitMix64 rng(cfg.seed + 1000ull + static_cast<std::uint64_t>(k));
        outcome.probes.push_back(multifunction_lipschitz_probe(
            run.instance.stages[k].constraints, run.instance.stages[k].manifold,
            run.instance.stages[k].state_space, cfg.h_x, run.h_u[k], cfg.probe_pairs,
            taus[k].value, rng));
        outcome.probes_ok = outcome.probes_ok && outcome.probes.back().within_bound;
    }
    outcome.pass = outcome.certificate.all_pass() && outcome.probes_ok;

    TreeWriter tree;
    tree.open("certificate_report");
    write_instance_block(tree, cfg, run);
    for (std::size_t k = 0; k < horizon; ++k) {
        const StageCertificate& sc = outcome.certificate.stages[k];
        tree.open("stage_" + std::to_string(k));
        tree.kv("a", sc.con_constant);
        tree.kv("tau", sc.tau);
        tree.kv("tau_source", sc.tau_empirical ? std::string("empirical")
                                               : std::string("closed-form"));
        tree.kv("lip_manifold", sc.lip_manifold);
        tree.kv("expected_dynamics_factor", sc.expected_factor);
        tree.kv("bound", sc.bound);
        tree.kv("empirical", sc.empirical);
        tree.kv("slack", sc.slack);
        tree.kv("pass", sc.pass);
        tree.close();
    }
    tree.open("terminal");
    tree.kv("bound", outcome.certificate.terminal_bound);
    tree.kv("empirical", outcome.certificate.terminal_empirical);
    tree.kv("pass", outcome.certificate.terminal_pass);
    tree.close();
    for (std::size_t k = 0; k < horizon; ++k) {
        const ProbeReport& probe = outcome.probes[k];
        tree.open("multifunction_probe_stage_" + std::to_string(k));
        tree.kv("theoretical_bound", probe.theoretical_bound);
        tree.kv("slack", probe.slack);
        tree.kv("modulus", probe.modulus);
        tree.kv("within_bound", probe.within_bound);
        for (std::size_t p = 0; p < probe.pairs.size(); ++p) {
            const ProbePair& row = probe.pairs[p];
            tree.kv("pair_" + std::to_string(p),
                    format_double(row.state_distance) + " " + format_double(row.hausdorff) +
                        " " + format_double(row.bound));
        }
        tree.close();
    }
    tree.kv("verdict", outcome.pass ? std::string("PASS") : std::string("FAIL"));
    tree.close();

    outcome.report = tree.str();
    write_text_file((dir / "certificate.txt").string(), outcome.report);
    return outcome;
}

ImplicitProblem make_ift_problem(const IftConfig& cfg) {
    ImplicitProblem p;
    p.v0 = Eigen::VectorXd::Constant(1, cfg.v0);
    p.y0 = Eigen::VectorXd::Constant(1, cfg.y0);
    p.r1 = cfg.r1;
    p.r2 = cfg.r2;
    if (cfg.problem == "affine") {
        p.residual = [](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
            return Eigen::VectorXd::Constant(1, v[0] - y[0]).eval();
        };
        p.jac_v = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Constant(1, 1, 1.0).eval();
        };
        p.jac_y = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Constant(1, 1, -1.0).eval();
        };
    } else if (cfg.problem == "square") {
        p.residual = [](const Eigen::VectorXd& v, const Eigen::VectorXd& y) {
            return Eigen::VectorXd::Constant(1, v[0] * v[0] - y[0]).eval();
        };
        p.jac_v = [](const Eigen::VectorXd& v, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Constant(1, 1, 2.0 * v[0]).eval();
        };
        p.jac_y = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
            return Eigen::MatrixXd::Constant(1, 1, -1.0).eval();
        };
    } else {
        throw ConfigError("ift_problem: expected affine or square");
    }
    return p;
}

IftOutcome run_ift(const RunConfig& cfg) {
    validate(cfg);
    const fs::path dir = ensure_out_dir(cfg);
    const ImplicitProblem p = make_ift_problem(cfg.ift);

    IftOutcome outcome;
    outcome.radii = verify_radii(p, cfg.ift.samples);
    outcome.ok = outcome.radii.ok;

    TreeWriter tree;
    tree.open("radius_check");
    tree.kv("problem", cfg.ift.problem);
    tree.kv("residual_sup", outcome.radii.residual_sup);
    tree.kv("residual_bound", outcome.radii.residual_bound);
    tree.kv("residual_margin", outcome.radii.residual_margin());
    tree.kv("contraction_sup", outcome.radii.contraction_sup);
    tree.kv("contraction_bound", outcome.radii.contraction_bound);
    tree.kv("contraction_margin", outcome.radii.contraction_margin());
    tree.kv("ok", outcome.radii.ok);
    tree.close();
    outcome.summary = tree.str();
    std::cout << outcome.summary;

    if (!outcome.ok) return outcome;

    CsvWriter csv({"y", "q", "residual", "jacobian"});
    for (int i = 0; i < cfg.ift.grid; ++i) {
        const double t = static_cast<double>(i) / (cfg.ift.grid - 1);
        Eigen::VectorXd y = Eigen::VectorXd::Constant(1, cfg.ift.y0 - cfg.ift.r2 +
                                                             2.0 * cfg.ift.r2 * t);
        const Eigen::VectorXd v = solve_implicit(p, y);
        const double residual = p.residual(v, y).norm();
        const Eigen::MatrixXd jac = implicit_jacobian(p, y, v);
        csv.row({y[0], v[0], residual, jac(0, 0)});
    }
    write_text_file((dir / "ift_solutions.csv").string(), csv.str());
    return outcome;
}

}  // namespace lipdp
