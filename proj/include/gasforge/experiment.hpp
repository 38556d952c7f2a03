#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasforge/samplers.hpp"

namespace gasforge {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One experiment = one model + one sampler + one study, as archived in a
// flat JSON file. CLI flags may override seed/out/workers.
struct ExperimentConfig {
    std::string model;  // gue | ginibre | quartic | coulomb3d | loggas3d
    double beta = 2.0;
    int n = 0;  // N, number of particles
    std::string sampler = "hmc";
    double dt = 0.1;
    double alpha = 1.0;
    double gamma = 1.0;
    double total_time = 1e4;  // T; n_steps = ceil(T/dt)
    double burn_in_fraction = 0.5;
    long long thinning = 1;
    int n_chains = 1;
    std::uint64_t seed = 42;
    std::string study;  // density | radial-density | rejection-scaling |
                        // energy-scaling | edge-gumbel
    std::vector<double> dt_list;  // scaling studies
    int bins = 50;
    double r_max = 0.0;  // 0: derive from the oracle support / the data
    std::string out = "gasforge";

    bool operator==(const ExperimentConfig&) const = default;

    long long n_steps() const;
    GasModel make_model() const;
    SamplerParams make_params(const GasModel& m) const;
};

// Strict parse: unknown keys, wrong types and out-of-range values raise a
// ConfigError naming the key; model/N/study are required.
ExperimentConfig parse_config(const std::string& json_text);
std::string emit_config(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

// Runs the study and writes <out>_meta.json plus the study CSVs. Returns 0
// on success, 2 when a chain aborted (partial files are flagged in meta).
int run_experiment(const ExperimentConfig& config, int workers = 1);

std::vector<std::string> known_models();

}  // namespace gasforge
