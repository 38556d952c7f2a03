#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gasforge/diagnostics.hpp"

using namespace gasforge;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("histogram densities integrate to one, out-of-range kept apart") {
    std::vector<double> v = {-5.0, 0.1, 0.2, 0.35, 0.8, 0.99, 2.0, 3.0};
    const Histogram h = build_histogram(v, 4, 0.0, 1.0);
    CHECK(h.n_below == 1);
    CHECK(h.n_above == 2);
    long long in_range = 0;
    double mass = 0.0;
    for (int b = 0; b < h.n_bins(); ++b) {
        in_range += h.counts[b];
        mass += h.density[b] * h.width(b);
    }
    CHECK(in_range == 5);
    CHECK(std::abs(mass - 1.0) <= 1e-12);

    CHECK_THROWS(build_histogram(std::vector<double>{}, 4, 0.0, 1.0));
    CHECK_THROWS(build_histogram(v, 4, 1.0, 1.0));
}

TEST_CASE("histogram recovers a uniform density") {
    Rng rng(1);
    std::vector<double> v(200000);
    for (double& x : v) x = uniform01(rng);
    const Histogram h = build_histogram(v, 10, 0.0, 1.0);
    for (int b = 0; b < h.n_bins(); ++b)
        CHECK(std::abs(h.density[b] - 1.0) <= 0.05);
}

TEST_CASE("radial histogram of uniform disk and ball points") {
    Rng rng(2);
    // Uniform on the unit disk by rejection; radial law 2r.
    std::vector<double> flat2;
    while (flat2.size() < 2 * 100000) {
        const double x = 2.0 * uniform01(rng) - 1.0;
        const double y = 2.0 * uniform01(rng) - 1.0;
        if (x * x + y * y <= 1.0) {
            flat2.push_back(x);
            flat2.push_back(y);
        }
    }
    const Histogram h2 = radial_histogram(flat2, 2, 10, 1.0);
    for (int b = 0; b < h2.n_bins(); ++b)
        CHECK(std::abs(h2.density[b] - 2.0 * h2.mid(b)) <= 0.08);

    // Uniform on the unit ball; radial law 3r^2.
    std::vector<double> flat3;
    while (flat3.size() < 3 * 100000) {
        const double x = 2.0 * uniform01(rng) - 1.0;
        const double y = 2.0 * uniform01(rng) - 1.0;
        const double z = 2.0 * uniform01(rng) - 1.0;
        if (x * x + y * y + z * z <= 1.0) {
            flat3.push_back(x);
            flat3.push_back(y);
            flat3.push_back(z);
        }
    }
    const Histogram h3 = radial_histogram(flat3, 3, 10, 1.0);
    for (int b = 0; b < h3.n_bins(); ++b) {
        const double r = h3.mid(b);
        CHECK(std::abs(h3.density[b] - 3.0 * r * r) <= 0.1);
    }
}

TEST_CASE("pooling concatenates recorded ensembles in chain order") {
    ChainOutput a, b;
    a.n_particles = b.n_particles = 1;
    a.dim = b.dim = 2;
    a.samples = {{3.0, 4.0}};
    b.samples = {{0.0, 1.0}, {-2.0, 0.0}};
    const std::vector<ChainOutput> ens = {a, b};
    const auto radii = pooled_radii(ens);
    CHECK(radii == std::vector<double>{5.0, 1.0, 2.0});

    ChainOutput c;
    c.n_particles = 2;
    c.dim = 1;
    c.samples = {{0.5, -0.25}};
    const std::vector<ChainOutput> one = {c};
    CHECK(pooled_coordinates(one) == std::vector<double>{0.5, -0.25});
}

TEST_CASE("log-log fit recovers an exact power law") {
    const std::vector<double> dt = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> metric;
    for (const double t : dt) metric.push_back(2.5 * t * t * t);
    const SlopeStudy s = fit_loglog(dt, metric);
    CHECK(std::abs(s.slope - 3.0) <= 1e-12);
    CHECK(std::abs(s.intercept - std::log(2.5)) <= 1e-12);
    CHECK(std::abs(s.r_squared - 1.0) <= 1e-12);
}

TEST_CASE("max modulus series takes the per-record maximum radius") {
    ChainOutput out;
    out.n_particles = 2;
    out.dim = 2;
    out.samples = {{3.0, 4.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 1.0}};
    const auto series = max_modulus_series(out);
    REQUIRE(series.size() == 2);
    CHECK(series[0] == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(series[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("gumbel fit recovers synthetic parameters") {
    Rng rng(7);
    std::vector<double> v(200000);
    for (double& x : v) {
        const double u = std::max(uniform01(rng), 1e-300);
        x = -std::log(-std::log(u));  // standard Gumbel
    }
    const GumbelFit fit = fit_gumbel(v);
    CHECK(std::abs(fit.location) <= 0.02);
    CHECK(std::abs(fit.scale - 1.0) <= 0.02);
    CHECK(fit.ks_statistic <= 1.63 / std::sqrt(double(v.size())) * 2.0);

    const GumbelFit mle = fit_gumbel(v, true);
    CHECK(mle.method == "mle");
    CHECK(std::abs(mle.location) <= 0.02);
    CHECK(std::abs(mle.scale - 1.0) <= 0.02);
}

TEST_CASE("gumbel fit is affine equivariant") {
    Rng rng(9);
    std::vector<double> v(5000), w(5000);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double u = std::max(uniform01(rng), 1e-300);
        v[i] = -std::log(-std::log(u));
        w[i] = 2.0 + 0.5 * v[i];
    }
    const GumbelFit fv = fit_gumbel(v);
    const GumbelFit fw = fit_gumbel(w);
    CHECK(std::abs(fw.location - (2.0 + 0.5 * fv.location)) <= 1e-12);
    CHECK(std::abs(fw.scale - 0.5 * fv.scale) <= 1e-12);

    CHECK_THROWS(fit_gumbel(std::vector<double>{1.0}));
    CHECK_THROWS(fit_gumbel(std::vector<double>{1.0, 1.0, 1.0}));
}

TEST_CASE("ks statistic: exact small case and null calibration") {
    // Single value at the median of U(0,1): D = 1/2.
    const std::vector<double> one = {0.5};
    const double d1 = ks_statistic(one, [](double x) { return x; });
    CHECK(d1 == doctest::Approx(0.5).epsilon(1e-14));

    Rng rng(12);
    std::vector<double> u(10000);
    for (double& x : u) x = uniform01(rng);
    const double d = ks_statistic(u, [](double x) { return x; });
    CHECK(d <= 1.63 / std::sqrt(double(u.size())));  // 1% critical value

    // Invariance under a monotone change of variable.
    std::vector<double> g(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        g[i] = -std::log(-std::log(std::max(u[i], 1e-300)));
    const double dg = ks_statistic(g, [](double x) {
        return gumbel_cdf(x, 0.0, 1.0);
    });
    CHECK(std::abs(d - dg) <= 1e-12);
}

TEST_CASE("density distance distinguishes right and wrong references") {
    Rng rng(4);
    std::vector<double> v(400000);
    for (double& x : v) {  // semicircle radius 2 via rejection
        for (;;) {
            const double x0 = 4.0 * uniform01(rng) - 2.0;
            if (uniform01(rng) * (1.0 / kPi) <= semicircle_density(x0, 2.0)) {
                x = x0;
                break;
            }
        }
    }
    const DensityOracle right = semicircle_oracle(2.0);
    const auto [lo, hi] = default_histogram_range(right);
    CHECK(lo == doctest::Approx(-2.2));
    CHECK(hi == doctest::Approx(2.2));
    const Histogram h = build_histogram(v, 40, lo, hi);
    const DensityDistance close = density_distance(h, right);
    CHECK(close.l1_gap <= 0.02);
    CHECK(close.sup_gap <= 0.05);

    const DensityDistance far = density_distance(h, semicircle_oracle(1.0));
    CHECK(far.l1_gap > 0.3);
}
