#include "gasforge/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gasforge {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<double> hermite_functions(double t, int count) {
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    std::vector<double> h(count);
    h[0] = std::exp(-0.25 * t * t);
    if (count == 1) return h;
    h[1] = t * h[0];
    for (int l = 1; l + 1 < count; ++l)
        h[l + 1] =
            (t * h[l] - std::sqrt(static_cast<double>(l)) * h[l - 1]) /
            std::sqrt(static_cast<double>(l + 1));
    return h;
}

double gue_mean_density(double x, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double t = std::sqrt(static_cast<double>(n)) * x;
    const auto h = hermite_functions(t, n);
    double s = 0.0;
    for (const double v : h) s += v * v;  // h_l^2 folds in exp(-t^2/2)
    return s / std::sqrt(2.0 * kPi * n);
}

double semicircle_density(double x, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (std::abs(x) >= beta) return 0.0;
    return 2.0 * std::sqrt(beta * beta - x * x) / (kPi * beta * beta);
}

double incomplete_gamma_q(double a, double t) {
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
    if (t == 0.0) return 1.0;
    const double log_prefactor = a * std::log(t) - t - std::lgamma(a);
    if (t < a + 1.0) {
        // Lower series: P(a,t) = t^a e^{-t}/Gamma(a) sum_k t^k / (a)_{k+1}.
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < 1000; ++k) {
            term *= t / (a + k);
            sum += term;
            if (term < sum * 1e-16) break;
        }
        return 1.0 - std::exp(log_prefactor) * sum;
    }
    // Modified Lentz continued fraction for Q(a,t).
    constexpr double tiny = 1e-300;
    double b = t + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int k = 1; k < 1000; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(log_prefactor) * f;
}

double ginibre_mean_density(double r, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return incomplete_gamma_q(static_cast<double>(n), n * r * r) / kPi;
}

double ginibre_radial_density(double r, int n) {
    return 2.0 * r * incomplete_gamma_q(static_cast<double>(n), n * r * r);
}

double quartic_equilibrium_density(double x) {
    const double a = std::pow(3.0, -0.25);
    const double edge2 = 4.0 * a * a;
    if (x * x >= edge2) return 0.0;
    return (2.0 * a * a + x * x) * std::sqrt(edge2 - x * x) / (2.0 * kPi);
}

double equilibrium_radius(const GasModel& model) {
    switch (model.preset) {
        case Preset::BetaHermite:
            return model.beta;
        case Preset::BetaGinibre:
            return std::sqrt(model.beta / 2.0);
        case Preset::Quartic:
            return 2.0 * std::pow(3.0, -0.25);
        case Preset::Coulomb3d:
            return std::pow(model.beta * (model.particle_dim - 2) / 2.0,
                            1.0 / model.particle_dim);
        case Preset::LogGas3d:
            throw std::domain_error(
                "equilibrium measure of the 3D log-gas is unknown");
        case Preset::Custom:
            throw std::domain_error(
                "no known equilibrium radius for a custom model");
    }
    throw std::domain_error("unreachable");
}

double gumbel_cdf(double x, double mu, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
    return std::exp(-std::exp(-(x - mu) / s));
}

double gumbel_pdf(double x, double mu, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
    const double z = (x - mu) / s;
    return std::exp(-z - std::exp(-z)) / s;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int k = 1; k < panels; ++k)
        s += f(a + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

DensityOracle gue_mean_oracle(int n) {
    const double pad = 6.0 / std::sqrt(static_cast<double>(n));
    return {"gue-mean-N" + std::to_string(n), -2.0 - pad, 2.0 + pad,
            [n](double x) { return gue_mean_density(x, n); }};
}

DensityOracle semicircle_oracle(double beta) {
    return {"semicircle", -beta, beta,
            [beta](double x) { return semicircle_density(x, beta); }};
}

DensityOracle ginibre_radial_oracle(int n) {
    const double hi = 1.0 + 6.0 / std::sqrt(static_cast<double>(n));
    return {"ginibre-radial-N" + std::to_string(n), 0.0, hi,
            [n](double r) { return ginibre_radial_density(r, n); }};
}

DensityOracle uniform_disk_radial_oracle(double beta) {
    const double radius = std::sqrt(beta / 2.0);
    return {"uniform-disk-radial", 0.0, radius, [radius](double r) {
                return (r < 0.0 || r > radius) ? 0.0
                                               : 2.0 * r / (radius * radius);
            }};
}

DensityOracle uniform_ball_radial_oracle(double beta, int d) {
    const double radius = std::pow(beta * (d - 2) / 2.0, 1.0 / d);
    const double rd = std::pow(radius, d);
    return {"uniform-ball-radial", 0.0, radius, [=](double r) {
                return (r < 0.0 || r > radius)
                           ? 0.0
                           : d * std::pow(r, d - 1) / rd;
            }};
}

DensityOracle quartic_equilibrium_oracle() {
    const double edge = 2.0 * std::pow(3.0, -0.25);
    return {"quartic-equilibrium", -edge, edge, quartic_equilibrium_density};
}

DensityOracle gumbel_oracle(double mu, double s) {
    return {"gumbel", mu - 10.0 * s, mu + 25.0 * s,
            [mu, s](double x) { return gumbel_pdf(x, mu, s); }};
}

std::optional<DensityOracle> oracle_for_model(const GasModel& model,
                                              bool radial) {
    switch (model.preset) {
        case Preset::BetaHermite:
            if (radial) return std::nullopt;
            if (model.beta == 2.0)
                return gue_mean_oracle(model.n_particles);
            return semicircle_oracle(model.beta);
        case Preset::Quartic:
            if (radial) return std::nullopt;
            return quartic_equilibrium_oracle();
        case Preset::BetaGinibre:
            if (!radial) return std::nullopt;
            if (model.beta == 2.0)
                return ginibre_radial_oracle(model.n_particles);
            return uniform_disk_radial_oracle(model.beta);
        case Preset::Coulomb3d:
            if (!radial) return std::nullopt;
            return uniform_ball_radial_oracle(model.beta,
                                              model.particle_dim);
        case Preset::LogGas3d:
        case Preset::Custom:
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace gasforge
