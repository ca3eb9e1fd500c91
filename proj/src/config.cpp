#include "histloc/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace histloc {

void Config::validate() const {
    if (eps_norm <= 0.0 || eps_consistency <= 0.0 || eps_support <= 0.0)
        throw std::invalid_argument("config: tolerances must be positive");
    if (lambda_grid_size < 0) throw std::invalid_argument("config: lambda_grid_size must be >= 0");
    if (format != "text" && format != "json")
        throw std::invalid_argument("config: format must be text or json");
}

Config load_config_file(const std::string& path, Config base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);

        if (key == "eps_norm") base.eps_norm = std::stod(value);
        else if (key == "eps_consistency") base.eps_consistency = std::stod(value);
        else if (key == "eps_support") base.eps_support = std::stod(value);
        else if (key == "lambda_grid_size") base.lambda_grid_size = std::stoi(value);
        else if (key == "seed") base.seed = std::stoull(value);
        else if (key == "format") base.format = value;
        else if (key == "exec") base.exec = value == "serial" ? ExecMode::serial : ExecMode::openmp;
        else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key " + key);
    }
    base.validate();
    return base;
}

void apply_env_overrides(Config& config) {
    if (const char* seed = std::getenv("HISTLOC_SEED")) config.seed = std::stoull(seed);
}

}  // namespace histloc
