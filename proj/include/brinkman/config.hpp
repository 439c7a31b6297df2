#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brinkman/harness.hpp"
#include "brinkman/klevel.hpp"
#include "brinkman/limit.hpp"

namespace brinkman {

/// Union of all module config sections, parsed from the plain key-value
/// format with [section] headers. Unknown sections or keys are rejected.
struct RunConfig {
    Grid grid{1, 256, 8.0};
    GrowthLaw law = GrowthLaw::linear(1.0, 1.0);
    EllipticOptions elliptic;
    Omega0Spec omega0;

    double k = 80.0;
    double klevel_t_end = 0.5;
    double cfl = 0.9;
    double amplitude_frac = 0.2;
    std::vector<double> klevel_snapshots;

    double limit_t_end = 0.5;
    double limit_cfl = 0.9;
    double fp_tol = 1e-10;
    std::vector<double> limit_snapshots;

    HarnessParams harness;
    std::vector<double> ks;
    std::vector<double> times;

    std::uint64_t seed = 1;
    std::string output_dir = "out";

    KLevelConfig klevel_config() const;
    LimitConfig limit_config() const;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config_file(const std::string& path);

/// Canonical echo of a config; re-parsing it yields an equal RunConfig.
std::string config_echo(const RunConfig& config);
void write_config_echo(const RunConfig& config, const std::string& path);

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace brinkman
