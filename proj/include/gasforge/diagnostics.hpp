#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gasforge/oracles.hpp"
#include "gasforge/samplers.hpp"

namespace gasforge {

struct Histogram {
    std::vector<double> bin_edges;  // n_bins + 1, strictly increasing
    std::vector<long long> counts;
    std::vector<double> density;  // counts / (in-range total * width)
    long long n_below = 0;        // out-of-range values, reported apart
    long long n_above = 0;

    int n_bins() const { return static_cast<int>(counts.size()); }
    double mid(int b) const {
        return 0.5 * (bin_edges[b] + bin_edges[b + 1]);
    }
    double width(int b) const { return bin_edges[b + 1] - bin_edges[b]; }
};

// Uniform bins over [lo, hi); values outside are counted separately. Throws
// on empty input or an empty range.
Histogram build_histogram(std::span<const double> values, int n_bins,
                          double lo, double hi);

// Histogram of the radii |x| of a flat buffer of d-dimensional points,
// normalized as a density in r (not per area/volume).
Histogram radial_histogram(std::span<const double> flat_positions, int d,
                           int n_bins, double r_max);

// Pool the recorded particle coordinates (d = 1) or radii (d >= 2) of an
// ensemble, in chain-index order.
std::vector<double> pooled_coordinates(std::span<const ChainOutput> outputs);
std::vector<double> pooled_radii(std::span<const ChainOutput> outputs);

struct SlopeStudy {
    std::vector<double> dt_values;
    std::vector<double> metric_values;
    double slope = 0.0;
    double intercept = 0.0;  // of the (log dt, log metric) fit
    double r_squared = 0.0;
};

// Least-squares fit of log(metric) against log(dt).
SlopeStudy fit_loglog(std::span<const double> dt_values,
                      std::span<const double> metric_values);

// HMC rejection-rate scaling: one chain per dt with n_steps = ceil(T/dt);
// the metric is the Metropolis rejection fraction (invalid-state
// short-circuits are excluded from the count, as reported in ChainOutput).
SlopeStudy rejection_scaling_study(const GasModel& model,
                                   SamplerParams base,
                                   std::span<const double> dt_list,
                                   double total_time);

// Mean absolute one-step total-energy change of the Verlet map with the
// selection step turned off (OU refresh + Verlet, every move accepted).
SlopeStudy energy_scaling_study(const GasModel& model, SamplerParams base,
                                std::span<const double> dt_list,
                                double total_time);

// max_i |x_i| for each recorded configuration.
std::vector<double> max_modulus_series(const ChainOutput& output);

struct GumbelFit {
    double location = 0.0;
    double scale = 1.0;
    std::string method = "moments";
    double ks_statistic = 0.0;  // against the fitted CDF
};

// Translation-scale Gumbel fit; moments estimator by default
// (s = sqrt(6) sd / pi, mu = mean - euler_gamma s), one-dimensional MLE
// refinement on request. Throws on fewer than 2 values or zero variance.
GumbelFit fit_gumbel(std::span<const double> values, bool mle = false);

// Sup distance between the empirical CDF of `values` and `cdf`.
double ks_statistic(std::span<const double> values,
                    const std::function<double(double)>& cdf);

struct DensityDistance {
    double sup_gap = 0.0;
    double l1_gap = 0.0;
};

// Sup and L1 distances between a histogram density and an oracle evaluated
// at the bin midpoints.
DensityDistance density_distance(const Histogram& hist,
                                 const DensityOracle& oracle);

// Default histogram range for an oracle: its support inflated by 10%.
std::pair<double, double> default_histogram_range(const DensityOracle& o);

}  // namespace gasforge
