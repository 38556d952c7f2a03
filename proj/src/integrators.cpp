#include "gasforge/integrators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gasforge {

void SamplerParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (gamma < 0.0)
        throw std::invalid_argument("gamma must be nonnegative");
    if (!(beta_n > 0.0))
        throw std::invalid_argument("beta_n must be positive");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (burn_in_fraction < 0.0 || burn_in_fraction >= 1.0)
        throw std::invalid_argument("burn_in_fraction must be in [0, 1)");
    if (thinning < 1) throw std::invalid_argument("thinning must be >= 1");
    if (verlet_steps < 1)
        throw std::invalid_argument("verlet_steps must be >= 1");
    if ((n_steps - burn_in_steps()) / thinning < 1)
        throw std::invalid_argument(
            "burn_in_fraction and thinning leave no recorded sample");
}

void euler_maruyama_update(const GasModel& model, const SamplerParams& params,
                           Configuration& config,
                           std::span<const double> noise) {
    std::vector<double> grad(model.dof());
    if (!grad_energy(model, config, grad))
        throw std::runtime_error(
            "euler_maruyama_update: gradient singular (coincident pair)");
    const double adt = params.alpha * params.dt;
    const double sigma = std::sqrt(2.0 * adt / params.beta_n);
    for (std::size_t k = 0; k < grad.size(); ++k)
        config.positions[k] += -grad[k] * adt + sigma * noise[k];
}

void euler_maruyama_step(const GasModel& model, const SamplerParams& params,
                         Configuration& config, Rng& rng) {
    std::vector<double> noise(model.dof());
    fill_gaussian(rng, noise);
    euler_maruyama_update(model, params, config, noise);
}

void tamed_euler_update(const GasModel& model, const SamplerParams& params,
                        Configuration& config,
                        std::span<const double> noise) {
    std::vector<double> grad(model.dof());
    const bool ok = grad_energy(model, config, grad);
    const double adt = params.alpha * params.dt;
    const double sigma = std::sqrt(2.0 * adt / params.beta_n);
    if (!ok) {
        // Limit of the taming formula: a unit-magnitude drift. With an exact
        // coincidence the direction is undefined, so only the noise moves.
        for (std::size_t k = 0; k < grad.size(); ++k)
            config.positions[k] += sigma * noise[k];
        return;
    }
    double norm2 = 0.0;
    for (const double g : grad) norm2 += g * g;
    const double gnorm = std::sqrt(norm2);
    if (std::isinf(gnorm)) {
        for (std::size_t k = 0; k < grad.size(); ++k) {
            const double dir = std::isinf(grad[k])
                                   ? (grad[k] > 0 ? 1.0 : -1.0)
                                   : 0.0;
            config.positions[k] += -dir + sigma * noise[k];
        }
        return;
    }
    const double denom = 1.0 + gnorm * adt;
    for (std::size_t k = 0; k < grad.size(); ++k)
        config.positions[k] += -grad[k] * adt / denom + sigma * noise[k];
}

void tamed_euler_step(const GasModel& model, const SamplerParams& params,
                      Configuration& config, Rng& rng) {
    std::vector<double> noise(model.dof());
    fill_gaussian(rng, noise);
    tamed_euler_update(model, params, config, noise);
}

VerletResult verlet_step_cached(const GasModel& model,
                                const SamplerParams& params,
                                Configuration& config,
                                std::span<const double> grad_in,
                                std::span<double> grad_out) {
    const double adt = params.alpha * params.dt;
    const std::size_t dof = model.dof();
    for (std::size_t k = 0; k < dof; ++k) {
        config.momenta[k] -= 0.5 * adt * grad_in[k];
        config.positions[k] += adt * config.momenta[k];
    }
    const EnergyGrad eg = energy_and_grad(model, config, grad_out);
    if (!eg.valid) return {false, eg.energy};
    for (std::size_t k = 0; k < dof; ++k)
        config.momenta[k] -= 0.5 * adt * grad_out[k];
    bool finite = std::isfinite(eg.energy);
    for (std::size_t k = 0; finite && k < dof; ++k)
        finite = std::isfinite(config.positions[k]) &&
                 std::isfinite(config.momenta[k]);
    return {finite, eg.energy};
}

VerletResult verlet_step(const GasModel& model, const SamplerParams& params,
                         Configuration& config) {
    if (!config.has_momenta())
        throw std::invalid_argument("verlet_step requires momenta");
    std::vector<double> grad_in(model.dof()), grad_out(model.dof());
    if (!grad_energy(model, config, grad_in)) return {false, 0.0};
    return verlet_step_cached(model, params, config, grad_in, grad_out);
}

void ou_refresh(const SamplerParams& params, std::span<double> momenta,
                std::span<const double> noise) {
    const double eta = params.eta();
    const double s = std::sqrt((1.0 - eta * eta) / params.beta_n);
    for (std::size_t k = 0; k < momenta.size(); ++k)
        momenta[k] = eta * momenta[k] + s * noise[k];
}

void ou_refresh(const SamplerParams& params, std::span<double> momenta,
                Rng& rng) {
    std::vector<double> noise(momenta.size());
    fill_gaussian(rng, noise);
    ou_refresh(params, momenta, noise);
}

}  // namespace gasforge
