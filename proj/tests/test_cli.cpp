#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lipdp/pipeline.hpp"
#include "lipdp/report.hpp"
#include "lipdp/run_config.hpp"

namespace fs = std::filesystem;

namespace {

fs::path write_temp_config(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "lipdp_tests";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream f(path);
    f << body;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing round trip") {
    const fs::path path = write_temp_config("roundtrip.cfg", R"([market]
horizon = 2
cost_stock = 0.04
cost_bond = 0.06
riskless_floor = 0.35
state_floor0 = 0.12
wealth_cap0 = 1.8
initial_stock = 0.7
initial_bond = 0.9
yields = 1.05 1.01 0.25 ; 0.95 1.01 0.75

[solve]
hx = 0.05
hu = auto
seed = 9
probe_pairs = 17
utility = capped
utility_cap = 2.25
)");
    const lipdp::RunConfig cfg = lipdp::load_config(path.string());
    CHECK(cfg.market.horizon == 2);
    CHECK(cfg.market.cost_stock == 0.04);
    CHECK(cfg.market.riskless_floor == 0.35);
    CHECK(cfg.market.yield_laws.size() == 2);
    CHECK(cfg.market.yield_laws[1].support(0, 1) == 0.95);
    CHECK(cfg.market.yield_laws[1].weights[1] == 0.75);
    CHECK(cfg.h_x == 0.05);
    CHECK(cfg.h_u == 0.0);
    CHECK(cfg.seed == 9);
    CHECK(cfg.probe_pairs == 17);
    CHECK(cfg.utility.kind == lipdp::Utility::Capped);
    CHECK(cfg.utility.cap == 2.25);
}

TEST_CASE("per-stage yield overrides") {
    const fs::path path = write_temp_config("stages.cfg", R"(horizon = 2
yields = 1.1 1.02 1.0
yields_1 = 1.2 1.03 0.5 ; 0.8 1.03 0.5
)");
    const lipdp::RunConfig cfg = lipdp::load_config(path.string());
    CHECK(cfg.market.yield_laws[0].support.cols() == 1);
    CHECK(cfg.market.yield_laws[1].support.cols() == 2);
    CHECK(cfg.market.yield_laws[1].support(0, 0) == 1.2);
}

TEST_CASE("errors carry line and field context") {
    const fs::path unknown = write_temp_config("unknown.cfg", "horizon = 2\nwat = 3\n");
    try {
        lipdp::load_config(unknown.string());
        FAIL("expected ConfigError");
    } catch (const lipdp::ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("wat") != std::string::npos);
    }
    const fs::path bad = write_temp_config("bad_alpha.cfg", "riskless_floor = 1.5\n");
    try {
        lipdp::load_config(bad.string());
        FAIL("expected ConfigError");
    } catch (const lipdp::ConfigError& e) {
        CHECK(std::string(e.what()).find("riskless_floor") != std::string::npos);
    }
    CHECK_THROWS_AS(lipdp::load_config("/nonexistent/path.cfg"), lipdp::ConfigError);
}

TEST_CASE("value tables are written per stage") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.25;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "solve_out").string();
    lipdp::run_solve(cfg);
    for (int k = 0; k <= cfg.market.horizon; ++k) {
        const fs::path file =
            fs::path(cfg.out_dir) / ("value_stage_" + std::to_string(k) + ".csv");
        REQUIRE(fs::exists(file));
        const std::string content = slurp(file);
        if (k < cfg.market.horizon)
            CHECK(content.rfind("S,B,J,u,v\n", 0) == 0);
        else
            CHECK(content.rfind("S,B,J\n", 0) == 0);
        CHECK(content.find("nan") == std::string::npos);
        CHECK(content.find("inf") == std::string::npos);
    }
}

TEST_CASE("zero utility yields all-zero tables") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.3;
    cfg.utility.kind = lipdp::Utility::Zero;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "zero_out").string();
    lipdp::run_solve(cfg);
    const std::string content =
        slurp(fs::path(cfg.out_dir) / "value_stage_0.csv");
    std::istringstream lines(content);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        // Third column is the value.
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        const auto third = line.find(',', second + 1);
        CHECK(line.substr(second + 1, third - second - 1) == "0");
    }
}

TEST_CASE("certify reports are byte-identical across runs") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.2;
    cfg.probe_pairs = 25;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "cert_a").string();
    const auto a = lipdp::run_certify(cfg);
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "cert_b").string();
    const auto b = lipdp::run_certify(cfg);
    CHECK(a.report == b.report);
    CHECK(a.pass);
    CHECK(slurp(fs::path(cfg.out_dir) / "certificate.txt") == a.report);
}

TEST_CASE("state-free constraint collapses the chain to the dynamics factors") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.25;
    cfg.constraint = lipdp::ConstraintVariant::StateFree;
    cfg.probe_pairs = 10;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "xfree").string();
    const auto outcome = lipdp::run_certify(cfg);
    double expected = lipdp::utility_lipschitz(cfg.utility);
    for (const auto& sc : outcome.certificate.stages) expected *= sc.expected_factor;
    CHECK(outcome.certificate.stages[0].bound ==
          doctest::Approx(expected).epsilon(1e-12));
    for (const auto& sc : outcome.certificate.stages) {
        CHECK(sc.tau == 0.0);
        CHECK(sc.tau_empirical);
    }
    CHECK(outcome.report.find("tau_source = empirical") != std::string::npos);
}

TEST_CASE("ift pipeline emits margins and the solution table") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "ift_sq").string();
    cfg.ift.problem = "square";
    cfg.ift.v0 = 1.0;
    cfg.ift.y0 = 1.0;
    cfg.ift.r1 = 0.1;
    cfg.ift.r2 = 0.05;
    cfg.ift.grid = 11;
    const auto outcome = lipdp::run_ift(cfg);
    CHECK(outcome.ok);
    const std::string csv = slurp(fs::path(cfg.out_dir) / "ift_solutions.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "y,q,residual,jacobian");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string y_s, q_s;
        std::getline(cells, y_s, ',');
        std::getline(cells, q_s, ',');
        CHECK(std::abs(std::stod(q_s) - std::sqrt(std::stod(y_s))) <= 1e-10);
    }
    CHECK(rows == 11);

    // Failing radii are reported, not silently accepted.
    cfg.ift.problem = "affine";
    cfg.ift.v0 = 0.0;
    cfg.ift.y0 = 0.0;
    cfg.ift.r1 = 1.0;
    cfg.ift.r2 = 0.6;
    const auto failing = lipdp::run_ift(cfg);
    CHECK_FALSE(failing.ok);
    CHECK(failing.summary.find("ok = false") != std::string::npos);
}

TEST_CASE("documented config block parses as written") {
    const fs::path path = write_temp_config("readme.cfg", R"([market]
horizon = 3
cost_stock = 0.05        # cost charged on buying stock
cost_bond = 0.05         # cost charged on buying bond
riskless_floor = 0.4     # minimal riskless wealth fraction
state_floor0 = 0.1       # per-asset floor of the initial region
wealth_cap0 = 2.0        # total-wealth cap of the initial region
initial_stock = 0.8
initial_bond = 1.0
yields = 1.1 1.02 0.5 ; 0.9 1.02 0.5   # atoms "y_s y_b weight", ';' separated

[run]
constraint = regulatory  # or state-free (x-independent constraint, tau = 0)
utility = linear         # linear | capped | zero
utility_cap = 2.5
hx = 0.035               # state mesh
hu = auto                # control mesh; auto = delta_k / 60 per stage
probe_pairs = 200
slack_factor = 2.0       # slack_k = factor * L_k * h_u / grid spacing
seed = 42
threads = 1

[ift]
ift_problem = affine     # affine (F = v - y) | square (F = v^2 - y)
ift_v0 = 0.0
ift_y0 = 0.0
ift_r1 = 1.0
ift_r2 = 0.4
ift_samples = 4096
ift_grid = 21
)");
    const lipdp::RunConfig cfg = lipdp::load_config(path.string());
    const lipdp::RunConfig defaults = lipdp::default_config();
    CHECK(cfg.market.horizon == defaults.market.horizon);
    CHECK(cfg.h_x == defaults.h_x);
    CHECK(cfg.seed == defaults.seed);
    CHECK(cfg.market.yield_laws[0].support(0, 0) ==
          defaults.market.yield_laws[0].support(0, 0));
}

TEST_CASE("explicit control mesh overrides the per-stage default") {
    lipdp::RunConfig cfg = lipdp::default_config();
    const auto constants = lipdp::state_space_recursion(cfg.market);
    const auto auto_meshes = lipdp::control_meshes(cfg, constants);
    for (std::size_t k = 0; k < auto_meshes.size(); ++k)
        CHECK(auto_meshes[k] ==
              doctest::Approx(constants.stages[k].delta / 60.0).epsilon(1e-15));
    cfg.h_u = 0.05;
    for (double mesh : lipdp::control_meshes(cfg, constants)) CHECK(mesh == 0.05);
}

TEST_CASE("certificate report carries the expected sections") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.25;
    cfg.probe_pairs = 5;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "sections").string();
    const auto outcome = lipdp::run_certify(cfg);
    for (const std::string key :
         {"certificate_report", "instance", "initial_value", "stage_0", "stage_2",
          "terminal", "multifunction_probe_stage_0", "pair_4", "verdict = PASS",
          "floor_recursion = min-over-joint-support"})
        CHECK(outcome.report.find(key) != std::string::npos);
}

TEST_CASE("emitted bound chain is reproducible from the emitted factors") {
    lipdp::RunConfig cfg = lipdp::default_config();
    cfg.h_x = 0.25;
    cfg.probe_pairs = 5;
    cfg.out_dir = (fs::temp_directory_path() / "lipdp_tests" / "replay").string();
    const auto outcome = lipdp::run_certify(cfg);

    auto field = [&](const std::string& section, const std::string& key) {
        const std::size_t at = outcome.report.find("\n  " + section + "\n");
        REQUIRE(at != std::string::npos);
        const std::size_t kat = outcome.report.find(key + " = ", at);
        REQUIRE(kat != std::string::npos);
        return std::stod(outcome.report.substr(kat + key.size() + 3));
    };

    double bound = field("terminal", "bound");
    for (int k = cfg.market.horizon - 1; k >= 0; --k) {
        const std::string sec = "stage_" + std::to_string(k);
        bound *= field(sec, "expected_dynamics_factor") *
                 (1.0 + field(sec, "a") * field(sec, "tau") * field(sec, "lip_manifold"));
        CHECK(field(sec, "bound") == doctest::Approx(bound).epsilon(1e-12));
    }
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 123456.789, 1e-17, 0.0}) {
        CHECK(std::stod(lipdp::format_double(v)) == v);
    }
}

}  // TEST_SUITE
