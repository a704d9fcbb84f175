// Command-line driver: solve | certify | ift over a flat key = value config.
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 certificate
// failure under --strict.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "lipdp/pipeline.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    double hx = 0.0;
    double hu = -1.0;
    int threads = 0;
    bool seed_set = false, out_set = false, hx_set = false, hu_set = false,
         threads_set = false, strict = false;
};

void add_common(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "Config file (key = value)");
    cmd->add_option("--out", ov.out_dir, "Output directory")
        ->each([&ov](const std::string&) { ov.out_set = true; });
    cmd->add_option("--seed", ov.seed, "Random seed")
        ->each([&ov](const std::string&) { ov.seed_set = true; });
    cmd->add_option("--hx", ov.hx, "State mesh override")
        ->each([&ov](const std::string&) { ov.hx_set = true; });
    cmd->add_option("--hu", ov.hu, "Control mesh override (0 = auto)")
        ->each([&ov](const std::string&) { ov.hu_set = true; });
    cmd->add_option("--threads", ov.threads, "Worker cap for the DP sweep")
        ->each([&ov](const std::string&) { ov.threads_set = true; });
    cmd->add_flag("--strict", ov.strict, "Nonzero exit when the certificate fails");
}

lipdp::RunConfig make_config(const Overrides& ov) {
    lipdp::RunConfig cfg =
        ov.config_path.empty() ? lipdp::default_config() : lipdp::load_config(ov.config_path);
    if (ov.out_set) cfg.out_dir = ov.out_dir;
    if (ov.seed_set) cfg.seed = ov.seed;
    if (ov.hx_set) cfg.h_x = ov.hx;
    if (ov.hu_set) cfg.h_u = ov.hu;
    if (ov.threads_set) cfg.threads = ov.threads;
    cfg.strict = ov.strict;
    lipdp::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained stochastic DP solver with Lipschitz certification"};
    app.require_subcommand(1);

    Overrides ov;
    CLI::App* solve = app.add_subcommand("solve", "Backward induction; value/policy tables");
    CLI::App* certify = app.add_subcommand("certify", "Lipschitz certificate and probes");
    CLI::App* ift = app.add_subcommand("ift", "Implicit-function radius check and table");
    for (CLI::App* cmd : {solve, certify, ift}) add_common(cmd, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        const lipdp::RunConfig cfg = make_config(ov);
        if (solve->parsed()) {
            lipdp::run_solve(cfg);
            std::cout << "wrote value/policy tables to " << cfg.out_dir << "\n";
        } else if (certify->parsed()) {
            const lipdp::CertifyOutcome outcome = lipdp::run_certify(cfg);
            std::cout << "certificate: " << (outcome.pass ? "PASS" : "FAIL") << " ("
                      << cfg.out_dir << "/certificate.txt)\n";
            if (!outcome.pass && cfg.strict) {
                std::cerr << "certificate failed under --strict\n";
                return 4;
            }
        } else {
            const lipdp::IftOutcome outcome = lipdp::run_ift(cfg);
            if (!outcome.ok) {
                std::cerr << "radius conditions failed\n";
                return 3;
            }
            std::cout << "wrote implicit-map table to " << cfg.out_dir << "\n";
        }
    } catch (const lipdp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lipdp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
