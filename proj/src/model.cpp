#include "gasforge/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gasforge {

namespace {

void check_shape(const GasModel& model, const Configuration& config) {
    if (config.n_particles != model.n_particles ||
        config.dim != model.particle_dim ||
        config.positions.size() != model.dof()) {
        throw std::invalid_argument(
            "configuration shape does not match model (N=" +
            std::to_string(model.n_particles) +
            ", d=" + std::to_string(model.particle_dim) + ")");
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

GasModel GasModel::beta_hermite(double beta, int n_particles) {
    GasModel m;
    m.particle_dim = 1;
    m.ambient_dim = 2;
    m.beta = beta;
    m.n_particles = n_particles;
    m.confinement = Confinement::Quadratic;
    m.confinement_scale = 1.0 / (2.0 * beta);
    m.pair = {Interaction::Log, 2};
    m.beta_n = static_cast<double>(n_particles) * n_particles * beta;
    m.preset = Preset::BetaHermite;
    return m;
}

GasModel GasModel::beta_ginibre(double beta, int n_particles) {
    GasModel m;
    m.particle_dim = 2;
    m.ambient_dim = 2;
    m.beta = beta;
    m.n_particles = n_particles;
    m.confinement = Confinement::Quadratic;
    m.confinement_scale = 1.0 / beta;
    m.pair = {Interaction::Log, 2};
    m.beta_n = static_cast<double>(n_particles) * n_particles * beta;
    m.preset = Preset::BetaGinibre;
    return m;
}

GasModel GasModel::quartic(int n_particles) {
    GasModel m;
    m.particle_dim = 1;
    m.ambient_dim = 2;
    m.beta = 2.0;
    m.n_particles = n_particles;
    m.confinement = Confinement::Quartic;
    // 1/(4 beta) balances the quartic force against the pair repulsion so
    // that the equilibrium support edge sits at 2 * 3^{-1/4} (for beta = 2).
    m.confinement_scale = 1.0 / (4.0 * m.beta);
    m.pair = {Interaction::Log, 2};
    m.beta_n = static_cast<double>(n_particles) * n_particles * m.beta;
    m.preset = Preset::Quartic;
    return m;
}

GasModel GasModel::coulomb3d(double beta, int n_particles) {
    GasModel m;
    m.particle_dim = 3;
    m.ambient_dim = 3;
    m.beta = beta;
    m.n_particles = n_particles;
    m.confinement = Confinement::Quadratic;
    m.confinement_scale = 1.0 / beta;
    m.pair = {Interaction::Coulomb, 3};
    m.beta_n = static_cast<double>(n_particles) * n_particles * beta;
    m.preset = Preset::Coulomb3d;
    return m;
}

GasModel GasModel::loggas3d(double beta, int n_particles) {
    GasModel m = coulomb3d(beta, n_particles);
    m.ambient_dim = 2;
    m.pair = {Interaction::Log, 2};
    m.preset = Preset::LogGas3d;
    return m;
}

GasModel GasModel::from_name(const std::string& name, double beta,
                             int n_particles) {
    if (name == "gue" || name == "hermite" || name == "beta-hermite")
        return beta_hermite(beta, n_particles);
    if (name == "ginibre" || name == "beta-ginibre")
        return beta_ginibre(beta, n_particles);
    if (name == "quartic") return quartic(n_particles);
    if (name == "coulomb3d") return coulomb3d(beta, n_particles);
    if (name == "loggas3d") return loggas3d(beta, n_particles);
    throw std::invalid_argument("unknown model preset: " + name);
}

double GasModel::confinement_value(const double* x) const {
    switch (confinement) {
        case Confinement::Quadratic: {
            double r2 = 0.0;
            for (int c = 0; c < particle_dim; ++c) r2 += x[c] * x[c];
            return confinement_scale * r2;
        }
        case Confinement::Quartic: {
            const double x2 = x[0] * x[0];
            return confinement_scale * x2 * x2;
        }
        case Confinement::HardWall:
            throw std::logic_error("HardWall confinement is not implemented");
    }
    return 0.0;
}

void GasModel::confinement_grad_accum(const double* x, double scale,
                                      double* g) const {
    switch (confinement) {
        case Confinement::Quadratic:
            for (int c = 0; c < particle_dim; ++c)
                g[c] += scale * 2.0 * confinement_scale * x[c];
            return;
        case Confinement::Quartic:
            g[0] += scale * 4.0 * confinement_scale * x[0] * x[0] * x[0];
            return;
        case Confinement::HardWall:
            throw std::logic_error("HardWall confinement is not implemented");
    }
}

double energy(const GasModel& model, const Configuration& config) {
    check_shape(model, config);
    const int n = model.n_particles;
    const int d = model.particle_dim;
    const auto sweep = kernels::pair_sweep(config.positions.data(), n, d,
                                           model.pair, nullptr);
    if (sweep.singular) return kInf;
    double v = 0.0;
    for (int i = 0; i < n; ++i)
        v += model.confinement_value(config.positions.data() +
                                     static_cast<std::size_t>(i) * d);
    const double nn = static_cast<double>(n);
    return v / nn + sweep.interaction_sum / (nn * nn);
}

bool grad_energy(const GasModel& model, const Configuration& config,
                 std::span<double> grad) {
    check_shape(model, config);
    if (grad.size() != model.dof())
        throw std::invalid_argument("gradient buffer has wrong size");
    const int n = model.n_particles;
    const int d = model.particle_dim;
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto sweep = kernels::pair_sweep(config.positions.data(), n, d,
                                           model.pair, grad.data());
    if (sweep.singular) return false;
    const double nn = static_cast<double>(n);
    const double inv_n2 = 1.0 / (nn * nn);
    for (double& g : grad) g *= inv_n2;
    for (int i = 0; i < n; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * d;
        model.confinement_grad_accum(config.positions.data() + off, 1.0 / nn,
                                     grad.data() + off);
    }
    return true;
}

EnergyGrad energy_and_grad(const GasModel& model, const Configuration& config,
                           std::span<double> grad) {
    check_shape(model, config);
    if (grad.size() != model.dof())
        throw std::invalid_argument("gradient buffer has wrong size");
    const int n = model.n_particles;
    const int d = model.particle_dim;
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto sweep = kernels::pair_sweep(config.positions.data(), n, d,
                                           model.pair, grad.data());
    if (sweep.singular) return {kInf, false};
    const double nn = static_cast<double>(n);
    const double inv_n2 = 1.0 / (nn * nn);
    for (double& g : grad) g *= inv_n2;
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t off = static_cast<std::size_t>(i) * d;
        const double* x = config.positions.data() + off;
        v += model.confinement_value(x);
        model.confinement_grad_accum(x, 1.0 / nn, grad.data() + off);
    }
    return {v / nn + sweep.interaction_sum * inv_n2, true};
}

double init_half_width(const GasModel& model) {
    switch (model.preset) {
        case Preset::BetaHermite:
            return model.beta;  // semicircle support [-beta, beta]
        case Preset::BetaGinibre:
            return std::sqrt(model.beta / 2.0);
        case Preset::Quartic:
            return 2.0 * std::pow(3.0, -0.25);
        case Preset::Coulomb3d:
            return std::pow(model.beta * (model.particle_dim - 2) / 2.0,
                            1.0 / model.particle_dim);
        case Preset::LogGas3d:
        case Preset::Custom:
            return 1.0;  // equilibrium support unknown
    }
    return 1.0;
}

Configuration random_initial(const GasModel& model, Rng& rng,
                             bool with_momenta) {
    Configuration config;
    config.n_particles = model.n_particles;
    config.dim = model.particle_dim;
    config.positions.resize(model.dof());
    const double w = init_half_width(model);
    const int n = model.n_particles;
    const int d = model.particle_dim;
    std::uniform_real_distribution<double> box(-w, w);
    // A pair much closer than the typical spacing carries a near-singular
    // repulsion whose gradient dwarfs every other force; a chain started
    // there can reject (or diverge) forever. Enforce a separation floor of a
    // quarter of the typical spacing when placing each particle.
    const double spacing = 2.0 * w / std::pow(double(n), 1.0 / d);
    const double min_r2 = 0.0625 * spacing * spacing;
    const int max_attempts = 1000;
    for (int i = 0; i < n; ++i) {
        double* xi = config.positions.data() + std::size_t(i) * d;
        for (int attempt = 0; attempt < max_attempts; ++attempt) {
            for (int c = 0; c < d; ++c) xi[c] = box(rng);
            bool ok = true;
            for (int j = 0; j < i && ok; ++j) {
                const double* xj = config.positions.data() + std::size_t(j) * d;
                double r2 = 0.0;
                for (int c = 0; c < d; ++c)
                    r2 += (xi[c] - xj[c]) * (xi[c] - xj[c]);
                ok = r2 >= min_r2;
            }
            if (ok) break;
        }
    }
    if (with_momenta) {
        config.momenta.resize(model.dof());
        fill_gaussian(rng, config.momenta);
        const double s = 1.0 / std::sqrt(model.beta_n);
        for (double& y : config.momenta) y *= s;
    }
    return config;
}

}  // namespace gasforge
