#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gasforge/integrators.hpp"
#include "gasforge/model.hpp"

namespace gasforge {

enum class SamplerKind { Hmc, Mala, Ula, TamedUla };

SamplerKind sampler_from_name(const std::string& name);
const char* sampler_name(SamplerKind kind);
bool sampler_is_kinetic(SamplerKind kind);

struct ChainOutput {
    int n_particles = 0;
    int dim = 0;
    std::vector<std::vector<double>> samples;  // recorded position buffers
    std::vector<long long> sample_steps;       // step index of each record
    std::vector<double> energy_trace;          // H at recording times
    long long steps_run = 0;
    long long n_proposals = 0;
    long long n_accepted = 0;
    long long n_rejected = 0;  // Metropolis rejections only
    long long n_invalid = 0;   // singular/non-finite proposals, reported apart
    double acceptance_rate = 1.0;  // 1.0 by convention for unadjusted chains
    bool aborted = false;
    std::string abort_message;
};

// Chain state with the energy and gradient of the current position cached,
// so each Metropolis step costs a single O(N^2) sweep.
struct ChainState {
    Configuration config;
    double energy = 0.0;
    std::vector<double> grad;

    static ChainState make(const GasModel& model, const Configuration& init);
};

// Metropolis log acceptance ratio for an Euler-Maruyama proposal from a to b
// (positions, energies and gradients of both ends given). Antisymmetric in
// (a, b).
double mala_log_ratio(const SamplerParams& params,
                      std::span<const double> pos_a, double energy_a,
                      std::span<const double> grad_a,
                      std::span<const double> pos_b, double energy_b,
                      std::span<const double> grad_b);

// One MALA step in place; returns true when the proposal was accepted.
// Proposals with a coincident pair are certain rejections.
bool mala_step(const GasModel& model, const SamplerParams& params,
               ChainState& state, Rng& rng, ChainOutput* stats = nullptr);

// One HMC step: OU refresh, Verlet proposal, Metropolis correction on the
// total energy, momentum negated on rejection.
bool hmc_step(const GasModel& model, const SamplerParams& params,
              ChainState& state, Rng& rng, ChainOutput* stats = nullptr);

// Drives the chosen step kernel for params.n_steps steps, recording thinned
// post-burn-in samples. Deterministic given (rng state, params, initial).
ChainOutput run_chain(const GasModel& model, const SamplerParams& params,
                      SamplerKind kind, const Configuration& initial,
                      Rng& rng);
ChainOutput run_chain(const GasModel& model, const SamplerParams& params,
                      SamplerKind kind, const Configuration& initial);

// Independent chains with per-chain seeds derive_seed(master_seed, i); each
// chain draws its own initial configuration. Results are ordered by chain
// index whatever the worker count; a chain abort never cancels the others.
std::vector<ChainOutput> run_ensemble(const GasModel& model,
                                      const SamplerParams& params,
                                      SamplerKind kind, int n_chains,
                                      std::uint64_t master_seed,
                                      int workers = 1);

}  // namespace gasforge
