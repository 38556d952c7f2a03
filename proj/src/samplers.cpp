#include "gasforge/samplers.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace gasforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool all_finite(const std::vector<double>& v) {
    for (const double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double kinetic_energy(const std::vector<double>& momenta) {
    double k = 0.0;
    for (const double y : momenta) k += y * y;
    return 0.5 * k;
}

// log K(a, b) for the Euler-Maruyama Gaussian kernel, up to its symmetric
// normalizing constant (which cancels in the Metropolis ratio).
double log_kernel(const SamplerParams& params, std::span<const double> a,
                  std::span<const double> grad_a, std::span<const double> b) {
    const double adt = params.alpha * params.dt;
    double q = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double r = b[k] - a[k] + adt * grad_a[k];
        q += r * r;
    }
    return -params.beta_n * q / (4.0 * adt);
}

}  // namespace

SamplerKind sampler_from_name(const std::string& name) {
    if (name == "hmc") return SamplerKind::Hmc;
    if (name == "mala") return SamplerKind::Mala;
    if (name == "ula") return SamplerKind::Ula;
    if (name == "tamed") return SamplerKind::TamedUla;
    throw std::invalid_argument("unknown sampler: " + name);
}

const char* sampler_name(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::Hmc: return "hmc";
        case SamplerKind::Mala: return "mala";
        case SamplerKind::Ula: return "ula";
        case SamplerKind::TamedUla: return "tamed";
    }
    return "?";
}

bool sampler_is_kinetic(SamplerKind kind) { return kind == SamplerKind::Hmc; }

ChainState ChainState::make(const GasModel& model,
                            const Configuration& init) {
    ChainState state;
    state.config = init;
    state.grad.resize(model.dof());
    const EnergyGrad eg = energy_and_grad(model, state.config, state.grad);
    if (!eg.valid || !std::isfinite(eg.energy))
        throw std::invalid_argument(
            "initial configuration has non-finite energy");
    state.energy = eg.energy;
    return state;
}

double mala_log_ratio(const SamplerParams& params,
                      std::span<const double> pos_a, double energy_a,
                      std::span<const double> grad_a,
                      std::span<const double> pos_b, double energy_b,
                      std::span<const double> grad_b) {
    return -params.beta_n * (energy_b - energy_a) +
           log_kernel(params, pos_b, grad_b, pos_a) -
           log_kernel(params, pos_a, grad_a, pos_b);
}

bool mala_step(const GasModel& model, const SamplerParams& params,
               ChainState& state, Rng& rng, ChainOutput* stats) {
    const std::size_t dof = model.dof();
    std::vector<double> noise(dof);
    fill_gaussian(rng, noise);
    const double adt = params.alpha * params.dt;
    const double sigma = std::sqrt(2.0 * adt / params.beta_n);

    Configuration proposal = state.config;
    for (std::size_t k = 0; k < dof; ++k)
        proposal.positions[k] +=
            -adt * state.grad[k] + sigma * noise[k];

    std::vector<double> grad_prop(dof);
    const EnergyGrad eg = energy_and_grad(model, proposal, grad_prop);
    const double u = uniform01(rng);
    if (stats != nullptr) ++stats->n_proposals;

    if (!eg.valid || !std::isfinite(eg.energy)) {
        if (stats != nullptr) ++stats->n_invalid;
        return false;
    }
    const double log_ratio = mala_log_ratio(
        params, state.config.positions, state.energy, state.grad,
        proposal.positions, eg.energy, grad_prop);
    if (std::log(u) < log_ratio) {
        state.config.positions = std::move(proposal.positions);
        state.energy = eg.energy;
        state.grad = std::move(grad_prop);
        if (stats != nullptr) ++stats->n_accepted;
        return true;
    }
    if (stats != nullptr) ++stats->n_rejected;
    return false;
}

bool hmc_step(const GasModel& model, const SamplerParams& params,
              ChainState& state, Rng& rng, ChainOutput* stats) {
    const std::size_t dof = model.dof();
    std::vector<double>& y = state.config.momenta;

    // Step 1: exact OU refresh of the momenta.
    ou_refresh(params, y, rng);
    const std::vector<double> y_refreshed = y;  // kept for the rejection flip
    const double kinetic_before = kinetic_energy(y);

    // Step 2: Verlet proposal (verlet_steps substeps, 1 by default).
    const std::vector<double> positions_before = state.config.positions;
    std::vector<double> grad_a = state.grad;
    std::vector<double> grad_b(dof);
    VerletResult verlet{};
    bool valid = true;
    for (int s = 0; s < params.verlet_steps && valid; ++s) {
        verlet = verlet_step_cached(model, params, state.config, grad_a,
                                    grad_b);
        valid = verlet.valid;
        std::swap(grad_a, grad_b);
    }

    const double u = uniform01(rng);
    if (stats != nullptr) ++stats->n_proposals;

    if (!valid) {
        // Invalid Verlet output: treated as delta H = +infinity, which is a
        // certain rejection (with momentum flip). Counted apart from the
        // Metropolis rejections.
        state.config.positions = positions_before;
        for (std::size_t k = 0; k < dof; ++k) y[k] = -y_refreshed[k];
        if (stats != nullptr) ++stats->n_invalid;
        return false;
    }

    // Step 3: probability ratio on the total energy H + |y|^2/2.
    const double delta_h = (verlet.energy + kinetic_energy(y)) -
                           (state.energy + kinetic_before);

    // Step 4: acceptance in log space (beta_n = N^2 beta underflows exp).
    if (std::isfinite(delta_h) &&
        std::log(u) < -params.beta_n * delta_h) {
        state.energy = verlet.energy;
        state.grad = std::move(grad_a);
        if (stats != nullptr) ++stats->n_accepted;
        return true;
    }
    state.config.positions = positions_before;
    for (std::size_t k = 0; k < dof; ++k) y[k] = -y_refreshed[k];
    if (stats != nullptr) ++stats->n_rejected;
    return false;
}

ChainOutput run_chain(const GasModel& model, const SamplerParams& params,
                      SamplerKind kind, const Configuration& initial,
                      Rng& rng) {
    params.validate();
    ChainOutput out;
    out.n_particles = model.n_particles;
    out.dim = model.particle_dim;

    Configuration config = initial;
    if (sampler_is_kinetic(kind) && !config.has_momenta()) {
        config.momenta.resize(model.dof());
        fill_gaussian(rng, config.momenta);
        const double s = 1.0 / std::sqrt(params.beta_n);
        for (double& v : config.momenta) v *= s;
    }

    const bool adjusted =
        kind == SamplerKind::Hmc || kind == SamplerKind::Mala;
    ChainState state;
    if (adjusted) state = ChainState::make(model, config);

    const long long burn_in = params.burn_in_steps();
    for (long long k = 1; k <= params.n_steps; ++k) {
        switch (kind) {
            case SamplerKind::Hmc:
                hmc_step(model, params, state, rng, &out);
                break;
            case SamplerKind::Mala:
                mala_step(model, params, state, rng, &out);
                break;
            case SamplerKind::Ula:
                try {
                    euler_maruyama_step(model, params, config, rng);
                } catch (const std::runtime_error& e) {
                    out.aborted = true;
                    out.abort_message = e.what();
                }
                break;
            case SamplerKind::TamedUla:
                tamed_euler_step(model, params, config, rng);
                break;
        }
        const std::vector<double>& pos =
            adjusted ? state.config.positions : config.positions;
        if (!adjusted && !out.aborted && !all_finite(config.positions)) {
            out.aborted = true;
            out.abort_message =
                "unadjusted chain diverged (non-finite coordinate) at step " +
                std::to_string(k);
        }
        if (out.aborted) {
            out.steps_run = k;
            break;
        }
        if (k > burn_in && (k - burn_in) % params.thinning == 0) {
            out.samples.push_back(pos);
            out.sample_steps.push_back(k);
            out.energy_trace.push_back(adjusted ? state.energy
                                                : energy(model, config));
        }
        out.steps_run = k;
    }
    out.acceptance_rate =
        out.n_proposals > 0
            ? static_cast<double>(out.n_accepted) / out.n_proposals
            : 1.0;
    return out;
}

ChainOutput run_chain(const GasModel& model, const SamplerParams& params,
                      SamplerKind kind, const Configuration& initial) {
    Rng rng(params.seed);
    return run_chain(model, params, kind, initial, rng);
}

std::vector<ChainOutput> run_ensemble(const GasModel& model,
                                      const SamplerParams& params,
                                      SamplerKind kind, int n_chains,
                                      std::uint64_t master_seed,
                                      int workers) {
    if (n_chains < 1)
        throw std::invalid_argument("n_chains must be >= 1");
    if (workers < 1) workers = 1;
    std::vector<ChainOutput> outputs(n_chains);

    auto run_one = [&](int i) {
        Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(i)));
        const Configuration init =
            random_initial(model, rng, sampler_is_kinetic(kind));
        SamplerParams chain_params = params;
        chain_params.seed = derive_seed(master_seed,
                                        static_cast<std::uint64_t>(i));
        try {
            outputs[i] = run_chain(model, chain_params, kind, init, rng);
        } catch (const std::exception& e) {
            outputs[i].aborted = true;
            outputs[i].abort_message = e.what();
        }
    };

    if (workers == 1 || n_chains == 1) {
        for (int i = 0; i < n_chains; ++i) run_one(i);
        return outputs;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int n_workers = std::min(workers, n_chains);
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_chains;
                 i = next.fetch_add(1))
                run_one(i);
        });
    for (auto& t : pool) t.join();
    return outputs;
}

}  // namespace gasforge
