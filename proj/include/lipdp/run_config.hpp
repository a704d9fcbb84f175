#pragma once

#include <cstdint>
#include <string>

#include "lipdp/finance.hpp"

namespace lipdp {

struct IftConfig {
    std::string problem = "affine";  // affine (F = v - y) | square (F = v^2 - y)
    double v0 = 0.0;
    double y0 = 0.0;
    double r1 = 1.0;
    double r2 = 0.4;
    int samples = 4096;
    int grid = 21;
};

/// Everything a run needs; flat key = value config plus CLI overrides.
/// A fixed seed makes outputs byte-identical across runs.
struct RunConfig {
    std::string problem = "finance";
    ConstraintVariant constraint = ConstraintVariant::Regulatory;
    MarketModel market;
    UtilitySpec utility;
    double h_x = 0.035;
    double h_u = 0.0;  // 0 = auto: delta_k / 60 per stage
    int probe_pairs = 200;
    double slack_factor = 2.0;
    std::uint64_t seed = 42;
    int threads = 1;
    bool strict = false;
    std::string out_dir = "out";
    IftConfig ift;
};

/// Built-in defaults (the desk instance).
RunConfig default_config();

/// Parses the flat key = value format ('#' comments, optional [section]
/// headers). Throws ConfigError with line/field diagnostics.
RunConfig load_config(const std::string& path);

/// Range checks; throws ConfigError naming the field.
void validate(const RunConfig& cfg);

/// Per-stage control meshes: the configured h_u, or delta_k / 60 when auto.
std::vector<double> control_meshes(const RunConfig& cfg, const FinanceConstants& constants);

}  // namespace lipdp
