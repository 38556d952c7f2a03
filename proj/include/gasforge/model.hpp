#pragma once

#include <span>
#include <string>
#include <vector>

#include "gasforge/kernels.hpp"
#include "gasforge/rng.hpp"

namespace gasforge {

// Confinement potential V. Quadratic is V(x) = scale * |x|^2; Quartic is
// V(x) = scale * x^4 (one-dimensional particles only). HardWall is declared for
// completeness (arcsine-law gas) but evaluating it is an error: the
// constrained dynamics it needs are out of scope.
enum class Confinement { Quadratic, Quartic, HardWall };

enum class Preset {
    BetaHermite,
    BetaGinibre,
    Quartic,
    Coulomb3d,
    LogGas3d,
    Custom,
};

// The gas being sampled: N particles in R^d with Boltzmann-Gibbs density
// proportional to exp(-beta_n * H) where
//   H(x) = (1/N) sum_i V(x_i) + (1/(2N^2)) sum_{i != j} W(x_i - x_j).
// Immutable after construction; shareable across threads.
struct GasModel {
    int particle_dim = 1;  // d
    int ambient_dim = 2;   // n, Coulomb kernel dimension (2 for log kernels)
    double beta = 2.0;
    int n_particles = 1;
    Confinement confinement = Confinement::Quadratic;
    double confinement_scale = 1.0;
    kernels::PairKernel pair{};
    double beta_n = 2.0;  // stored, not recomputed; presets set N^2 * beta
    Preset preset = Preset::Custom;

    // d=1, V(x) = x^2/(2 beta), log kernel, beta_n = N^2 beta. GUE at beta=2.
    static GasModel beta_hermite(double beta, int n_particles);
    // d=2, V(x) = |x|^2/beta, log kernel. Complex Ginibre at beta=2.
    static GasModel beta_ginibre(double beta, int n_particles);
    // d=1, V(x) = x^4/(4 beta), log kernel, beta = 2. The scaling matches
    // the pair repulsion so the equilibrium support edge is 2 * 3^{-1/4}.
    static GasModel quartic(int n_particles);
    // d=3, V(x) = |x|^2/beta, Coulomb kernel 1/|x|.
    static GasModel coulomb3d(double beta, int n_particles);
    // d=3, V(x) = |x|^2/beta, log kernel.
    static GasModel loggas3d(double beta, int n_particles);
    static GasModel from_name(const std::string& name, double beta,
                              int n_particles);

    std::size_t dof() const {
        return static_cast<std::size_t>(n_particles) * particle_dim;
    }

    double confinement_value(const double* x) const;
    // g += scale * grad V(x)
    void confinement_grad_accum(const double* x, double scale,
                                double* g) const;
};

// The chain state: N particle positions (flat buffer of N*d doubles), plus
// momenta for kinetic samplers.
struct Configuration {
    int n_particles = 0;
    int dim = 0;
    std::vector<double> positions;
    std::vector<double> momenta;  // empty when the sampler has no momenta

    bool has_momenta() const { return !momenta.empty(); }
    std::size_t dof() const {
        return static_cast<std::size_t>(n_particles) * dim;
    }
};

struct EnergyGrad {
    double energy = 0.0;
    bool valid = true;  // false on an exactly coincident pair
};

// H(x); +infinity when two particles coincide exactly (samplers treat that
// as certain rejection). Throws std::invalid_argument on a shape mismatch.
double energy(const GasModel& model, const Configuration& config);

// grad H into `grad` (N*d). Returns false when a pair coincides; the
// gradient contents are then unspecified.
bool grad_energy(const GasModel& model, const Configuration& config,
                 std::span<double> grad);

// Energy and gradient from a single fused pair sweep.
EnergyGrad energy_and_grad(const GasModel& model, const Configuration& config,
                           std::span<double> grad);

// Half-width of the initialization box (the known equilibrium support radius
// where available, 1 otherwise).
double init_half_width(const GasModel& model);

// i.i.d. uniform positions on the centered box, redrawn until pairwise
// distinct; momenta sampled N(0, I/beta_n).
Configuration random_initial(const GasModel& model, Rng& rng,
                             bool with_momenta);

}  // namespace gasforge
