#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "gasforge/model.hpp"
#include "gasforge/rng.hpp"

namespace gasforge {

// Everything that controls a run. alpha is the time-scale parameter of the
// dynamics, gamma the friction of the velocity refresh.
struct SamplerParams {
    double dt = 0.1;
    double alpha = 1.0;
    double gamma = 1.0;
    double beta_n = 1.0;  // copied from the model
    long long n_steps = 0;
    std::uint64_t seed = 0;
    double burn_in_fraction = 0.5;
    long long thinning = 1;
    int verlet_steps = 1;  // Verlet substeps per HMC proposal

    // OU refresh coefficient, in (0,1) for positive friction.
    double eta() const { return std::exp(-gamma * alpha * dt); }
    long long burn_in_steps() const {
        return static_cast<long long>(burn_in_fraction * n_steps);
    }
    // Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

// One Euler-Maruyama step of the overdamped dynamics, in place:
//   x' = x - grad H(x) alpha dt + sqrt(2 alpha dt / beta_n) G.
// `noise` is the dN standard Gaussian block. No rejection safeguard: this
// scheme is unstable near the interaction singularities by construction, and
// an infinite gradient propagates as an exception.
void euler_maruyama_update(const GasModel& model, const SamplerParams& params,
                           Configuration& config,
                           std::span<const double> noise);
void euler_maruyama_step(const GasModel& model, const SamplerParams& params,
                         Configuration& config, Rng& rng);

// Tamed variant: the drift becomes grad H alpha dt / (1 + |grad H| alpha dt),
// with |.| the Euclidean norm of the full dN gradient; its magnitude never
// exceeds 1. An infinite gradient maps to a unit drift in its direction.
void tamed_euler_update(const GasModel& model, const SamplerParams& params,
                        Configuration& config, std::span<const double> noise);
void tamed_euler_step(const GasModel& model, const SamplerParams& params,
                      Configuration& config, Rng& rng);

struct VerletResult {
    bool valid = false;     // false: coincident pair mid-step, caller rejects
    double energy = 0.0;    // H at the new positions when valid
};

// One velocity-Verlet step (half kick, drift, half kick on the gradient at
// the NEW positions), each term scaled by alpha. Deterministic, time
// reversible up to momentum negation. grad_in holds grad H at the current
// positions; on success grad_out holds grad H at the new positions so the
// caller never recomputes it.
VerletResult verlet_step_cached(const GasModel& model,
                                const SamplerParams& params,
                                Configuration& config,
                                std::span<const double> grad_in,
                                std::span<double> grad_out);

// Convenience form that computes the starting gradient itself.
VerletResult verlet_step(const GasModel& model, const SamplerParams& params,
                         Configuration& config);

// Exact Ornstein-Uhlenbeck momentum refresh:
//   y' = eta y + sqrt((1 - eta^2)/beta_n) G,  eta = exp(-gamma alpha dt).
void ou_refresh(const SamplerParams& params, std::span<double> momenta,
                std::span<const double> noise);
void ou_refresh(const SamplerParams& params, std::span<double> momenta,
                Rng& rng);

}  // namespace gasforge
