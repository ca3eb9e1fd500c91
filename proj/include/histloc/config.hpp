#pragma once

#include <cstdint>
#include <string>

#include "histloc/parallel.hpp"

namespace histloc {

struct Config {
    double eps_norm = 1e-10;
    double eps_consistency = 1e-9;
    double eps_support = 1e-9;
    int lambda_grid_size = 64;
    std::uint64_t seed = 42;
    std::string format = "text";  // "text" or "json"
    ExecMode exec = ExecMode::openmp;

    void validate() const;  // throws std::invalid_argument
};

/// key=value file, one entry per line, '#' comments. Unknown keys are
/// rejected. Missing file throws.
Config load_config_file(const std::string& path, Config base = {});

/// HISTLOC_SEED, when set, overrides the seed from file and flags.
void apply_env_overrides(Config& config);

}  // namespace histloc
