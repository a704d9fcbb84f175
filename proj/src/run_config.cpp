#include "lipdp/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lipdp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": " + key +
                          ": expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": " + key +
                          ": expected an integer, got '" + value + "'");
    }
}

// "ys yb p ; ys yb p ; ..."
DisturbanceLaw parse_yield_law(const std::string& key, const std::string& value, int line) {
    DisturbanceLaw law;
    std::vector<std::array<double, 3>> atoms;
    std::stringstream groups(value);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        std::istringstream fields(group);
        std::array<double, 3> atom{};
        if (!(fields >> atom[0] >> atom[1] >> atom[2]))
            throw ConfigError("line " + std::to_string(line) + ": " + key +
                              ": each atom needs 'y_s y_b weight', got '" + group + "'");
        std::string rest;
        if (fields >> rest)
            throw ConfigError("line " + std::to_string(line) + ": " + key +
                              ": trailing tokens in atom '" + group + "'");
        atoms.push_back(atom);
    }
    if (atoms.empty())
        throw ConfigError("line " + std::to_string(line) + ": " + key + ": no atoms given");
    law.support.resize(2, static_cast<Eigen::Index>(atoms.size()));
    law.weights.resize(static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        law.support(0, static_cast<Eigen::Index>(i)) = atoms[i][0];
        law.support(1, static_cast<Eigen::Index>(i)) = atoms[i][1];
        law.weights[static_cast<Eigen::Index>(i)] = atoms[i][2];
    }
    return law;
}

}  // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.market = desk_instance();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    RunConfig cfg = default_config();
    DisturbanceLaw shared_law;
    bool have_shared_law = false;
    std::vector<std::pair<int, DisturbanceLaw>> stage_laws;  // (stage, law)
    std::vector<std::pair<int, int>> stage_law_lines;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s.resize(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
            continue;  // section headers are organizational only
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key or value");

        if (key == "problem") {
            cfg.problem = value;
        } else if (key == "constraint") {
            if (value == "regulatory") cfg.constraint = ConstraintVariant::Regulatory;
            else if (value == "state-free") cfg.constraint = ConstraintVariant::StateFree;
            else throw ConfigError("line " + std::to_string(line) +
                                   ": constraint: expected regulatory or state-free");
        } else if (key == "horizon") {
            cfg.market.horizon = static_cast<int>(parse_int(key, value, line));
        } else if (key == "cost_stock") {
            cfg.market.cost_stock = parse_double(key, value, line);
        } else if (key == "cost_bond") {
            cfg.market.cost_bond = parse_double(key, value, line);
        } else if (key == "riskless_floor") {
            cfg.market.riskless_floor = parse_double(key, value, line);
        } else if (key == "state_floor0") {
            cfg.market.state_floor0 = parse_double(key, value, line);
        } else if (key == "wealth_cap0") {
            cfg.market.wealth_cap0 = parse_double(key, value, line);
        } else if (key == "initial_stock") {
            cfg.market.initial_stock = parse_double(key, value, line);
        } else if (key == "initial_bond") {
            cfg.market.initial_bond = parse_double(key, value, line);
        } else if (key == "yields") {
            shared_law = parse_yield_law(key, value, line);
            have_shared_law = true;
        } else if (key.rfind("yields_", 0) == 0) {
            const int stage =
                static_cast<int>(parse_int(key, key.substr(std::string("yields_").size()), line));
            stage_laws.emplace_back(stage, parse_yield_law(key, value, line));
            stage_law_lines.emplace_back(stage, line);
        } else if (key == "utility") {
            if (value == "linear") cfg.utility.kind = Utility::Linear;
            else if (value == "capped") cfg.utility.kind = Utility::Capped;
            else if (value == "zero") cfg.utility.kind = Utility::Zero;
            else throw ConfigError("line " + std::to_string(line) +
                                   ": utility: expected linear, capped or zero");
        } else if (key == "utility_cap") {
            cfg.utility.cap = parse_double(key, value, line);
        } else if (key == "hx") {
            cfg.h_x = parse_double(key, value, line);
        } else if (key == "hu") {
            cfg.h_u = value == "auto" ? 0.0 : parse_double(key, value, line);
        } else if (key == "probe_pairs") {
            cfg.probe_pairs = static_cast<int>(parse_int(key, value, line));
        } else if (key == "slack_factor") {
            cfg.slack_factor = parse_double(key, value, line);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(key, value, line));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_int(key, value, line));
        } else if (key == "out") {
            cfg.out_dir = value;
        } else if (key == "ift_problem") {
            cfg.ift.problem = value;
        } else if (key == "ift_v0") {
            cfg.ift.v0 = parse_double(key, value, line);
        } else if (key == "ift_y0") {
            cfg.ift.y0 = parse_double(key, value, line);
        } else if (key == "ift_r1") {
            cfg.ift.r1 = parse_double(key, value, line);
        } else if (key == "ift_r2") {
            cfg.ift.r2 = parse_double(key, value, line);
        } else if (key == "ift_samples") {
            cfg.ift.samples = static_cast<int>(parse_int(key, value, line));
        } else if (key == "ift_grid") {
            cfg.ift.grid = static_cast<int>(parse_int(key, value, line));
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }

    if (have_shared_law)
        cfg.market.yield_laws.assign(static_cast<std::size_t>(cfg.market.horizon), shared_law);
    else if (static_cast<int>(cfg.market.yield_laws.size()) != cfg.market.horizon &&
             !cfg.market.yield_laws.empty())
        cfg.market.yield_laws.resize(static_cast<std::size_t>(cfg.market.horizon),
                                     cfg.market.yield_laws.back());
    for (std::size_t i = 0; i < stage_laws.size(); ++i) {
        const int stage = stage_laws[i].first;
        if (stage < 0 || stage >= cfg.market.horizon)
            throw ConfigError("line " + std::to_string(stage_law_lines[i].second) +
                              ": yields_" + std::to_string(stage) +
                              ": stage index out of range");
        cfg.market.yield_laws[static_cast<std::size_t>(stage)] = stage_laws[i].second;
    }

    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.problem != "finance")
        throw ConfigError("problem: only 'finance' is available, got '" + cfg.problem + "'");
    try {
        validate(cfg.market);
        for (const auto& law : cfg.market.yield_laws) validate_law(law);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.h_x > 0.0)) throw ConfigError("hx: must be positive");
    if (cfg.h_u < 0.0) throw ConfigError("hu: must be positive or auto");
    if (cfg.probe_pairs < 1) throw ConfigError("probe_pairs: must be at least 1");
    if (cfg.slack_factor < 0.0) throw ConfigError("slack_factor: must be nonnegative");
    if (cfg.threads < 1) throw ConfigError("threads: must be at least 1");
    if (cfg.utility.kind == Utility::Capped && !(cfg.utility.cap > 0.0))
        throw ConfigError("utility_cap: must be positive");
    if (cfg.ift.problem != "affine" && cfg.ift.problem != "square")
        throw ConfigError("ift_problem: expected affine or square");
    if (!(cfg.ift.r1 > 0.0) || !(cfg.ift.r2 > 0.0))
        throw ConfigError("ift_r1/ift_r2: radii must be positive");
    if (cfg.ift.samples < 1) throw ConfigError("ift_samples: must be at least 1");
    if (cfg.ift.grid < 2) throw ConfigError("ift_grid: must be at least 2");
}

std::vector<double> control_meshes(const RunConfig& cfg, const FinanceConstants& constants) {
    std::vector<double> meshes;
    meshes.reserve(constants.stages.size());
    for (const auto& sc : constants.stages)
        meshes.push_back(cfg.h_u > 0.0 ? cfg.h_u : sc.delta / 60.0);
    return meshes;
}

}  // namespace lipdp
