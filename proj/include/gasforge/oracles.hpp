#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gasforge/model.hpp"

namespace gasforge {

// Weighted Hermite functions h_l(t) = H_l(t) exp(-t^2/4), l = 0..count-1,
// where (H_l) are the orthonormal polynomials of N(0,1). Folding the weight
// into the three-term recurrence keeps the values bounded for large l and t.
std::vector<double> hermite_functions(double t, int count);

// Density of the mean empirical spectral distribution of the GUE at size N:
// exp(-N x^2/2)/sqrt(2 pi N) * sum_{l<N} H_l(sqrt(N) x)^2.
double gue_mean_density(double x, int n);

// Wigner semicircle scaled by beta, supported by [-beta, beta]:
// 2 sqrt(beta^2 - x^2) / (pi beta^2). beta = 2 is the GUE limit law.
double semicircle_density(double x, double beta);

// Normalized upper incomplete Gamma Q(a, t) = Gamma(a, t)/Gamma(a), in [0,1].
// Series for t < a+1, Lentz continued fraction otherwise, both in log space.
double incomplete_gamma_q(double a, double t);

// Mean empirical density of the complex Ginibre ensemble at size N, as a
// planar density at radius r: Q(N, N r^2) / pi.
double ginibre_mean_density(double r, int n);
// Same law as a radial density: 2 r Q(N, N r^2).
double ginibre_radial_density(double r, int n);

// Equilibrium density of the quartic gas (V(x) = x^4/8 at beta = 2):
// (2a^2 + x^2) sqrt(4a^2 - x^2) / (2 pi) on [-2a, 2a], a = 3^{-1/4}.
double quartic_equilibrium_density(double x);

// Support radius of the known equilibrium measures of the presets. Throws
// std::domain_error for the 3D log-gas, whose equilibrium measure is unknown.
double equilibrium_radius(const GasModel& model);

double gumbel_cdf(double x, double mu, double s);
double gumbel_pdf(double x, double mu, double s);

// Composite Simpson quadrature (panel count rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels);

// An analytic reference density evaluated pointwise on [lo, hi] (effective
// support; tails beyond carry less than 1e-8 mass).
struct DensityOracle {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::function<double(double)> pdf;
};

DensityOracle gue_mean_oracle(int n);
DensityOracle semicircle_oracle(double beta);
DensityOracle ginibre_radial_oracle(int n);
DensityOracle uniform_disk_radial_oracle(double beta);
DensityOracle uniform_ball_radial_oracle(double beta, int d);
DensityOracle quartic_equilibrium_oracle();
DensityOracle gumbel_oracle(double mu, double s);

// The natural comparison density for a preset: finite-N mean density where a
// formula exists (GUE and Ginibre at beta = 2), the equilibrium measure
// otherwise, nothing for the 3D log-gas. `radial` selects the radial form
// used by histogram studies in dimension >= 2.
std::optional<DensityOracle> oracle_for_model(const GasModel& model,
                                              bool radial);

}  // namespace gasforge
