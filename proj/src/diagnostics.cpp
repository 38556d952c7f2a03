#include "gasforge/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gasforge {

namespace {
constexpr double kEulerGamma = 0.57721566490153286;
}

Histogram build_histogram(std::span<const double> values, int n_bins,
                          double lo, double hi) {
    if (values.empty()) throw std::invalid_argument("empty value set");
    if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("empty histogram range");
    Histogram h;
    h.bin_edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b)
        h.bin_edges[b] = lo + (hi - lo) * b / n_bins;
    h.counts.assign(n_bins, 0);
    const double inv_width = n_bins / (hi - lo);
    for (const double v : values) {
        if (v < lo) {
            ++h.n_below;
        } else if (v >= hi) {
            ++h.n_above;
        } else {
            int b = static_cast<int>((v - lo) * inv_width);
            if (b >= n_bins) b = n_bins - 1;
            ++h.counts[b];
        }
    }
    const long long total =
        static_cast<long long>(values.size()) - h.n_below - h.n_above;
    h.density.assign(n_bins, 0.0);
    if (total > 0)
        for (int b = 0; b < n_bins; ++b)
            h.density[b] = static_cast<double>(h.counts[b]) /
                           (static_cast<double>(total) * h.width(b));
    return h;
}

Histogram radial_histogram(std::span<const double> flat_positions, int d,
                           int n_bins, double r_max) {
    if (d < 2)
        throw std::invalid_argument("radial histogram needs dimension >= 2");
    if (flat_positions.size() % d != 0)
        throw std::invalid_argument("position buffer not a multiple of d");
    std::vector<double> radii;
    radii.reserve(flat_positions.size() / d);
    for (std::size_t i = 0; i + d <= flat_positions.size(); i += d) {
        double r2 = 0.0;
        for (int c = 0; c < d; ++c)
            r2 += flat_positions[i + c] * flat_positions[i + c];
        radii.push_back(std::sqrt(r2));
    }
    return build_histogram(radii, n_bins, 0.0, r_max);
}

std::vector<double> pooled_coordinates(std::span<const ChainOutput> outputs) {
    std::vector<double> pooled;
    for (const ChainOutput& out : outputs)
        for (const auto& sample : out.samples)
            pooled.insert(pooled.end(), sample.begin(), sample.end());
    return pooled;
}

std::vector<double> pooled_radii(std::span<const ChainOutput> outputs) {
    std::vector<double> pooled;
    for (const ChainOutput& out : outputs) {
        const int d = out.dim;
        for (const auto& sample : out.samples)
            for (std::size_t i = 0; i + d <= sample.size(); i += d) {
                double r2 = 0.0;
                for (int c = 0; c < d; ++c) r2 += sample[i + c] * sample[i + c];
                pooled.push_back(std::sqrt(r2));
            }
    }
    return pooled;
}

SlopeStudy fit_loglog(std::span<const double> dt_values,
                      std::span<const double> metric_values) {
    if (dt_values.size() != metric_values.size() || dt_values.size() < 2)
        throw std::invalid_argument("need >= 2 matching (dt, metric) points");
    SlopeStudy s;
    s.dt_values.assign(dt_values.begin(), dt_values.end());
    s.metric_values.assign(metric_values.begin(), metric_values.end());
    const std::size_t n = dt_values.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(dt_values[i] > 0.0) || !(metric_values[i] > 0.0))
            throw std::invalid_argument(
                "log-log fit needs positive dt and metric values");
        lx[i] = std::log(dt_values[i]);
        ly[i] = std::log(metric_values[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    s.slope = sxy / sxx;
    s.intercept = my - s.slope * mx;
    s.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return s;
}

SlopeStudy rejection_scaling_study(const GasModel& model, SamplerParams base,
                                   std::span<const double> dt_list,
                                   double total_time) {
    if (dt_list.size() < 3)
        throw std::invalid_argument("need at least 3 dt values");
    std::vector<double> metric;
    metric.reserve(dt_list.size());
    for (std::size_t i = 0; i < dt_list.size(); ++i) {
        SamplerParams p = base;
        p.dt = dt_list[i];
        p.n_steps = static_cast<long long>(std::ceil(total_time / p.dt));
        p.thinning = p.n_steps;  // samples are not the point here
        p.burn_in_fraction = 0.0;
        Rng rng(derive_seed(base.seed, i));
        const Configuration init = random_initial(model, rng, true);
        const ChainOutput out =
            run_chain(model, p, SamplerKind::Hmc, init, rng);
        metric.push_back(static_cast<double>(out.n_rejected) /
                         static_cast<double>(out.n_proposals));
    }
    return fit_loglog(dt_list, metric);
}

SlopeStudy energy_scaling_study(const GasModel& model, SamplerParams base,
                                std::span<const double> dt_list,
                                double total_time) {
    if (dt_list.size() < 3)
        throw std::invalid_argument("need at least 3 dt values");
    std::vector<double> metric;
    metric.reserve(dt_list.size());
    for (std::size_t i = 0; i < dt_list.size(); ++i) {
        SamplerParams p = base;
        p.dt = dt_list[i];
        const long long n_steps =
            static_cast<long long>(std::ceil(total_time / p.dt));
        Rng rng(derive_seed(base.seed, i));
        Configuration config = random_initial(model, rng, true);
        ChainState state = ChainState::make(model, config);
        std::vector<double> grad_next(model.dof());
        double sum_abs = 0.0;
        long long counted = 0;
        for (long long k = 0; k < n_steps; ++k) {
            ou_refresh(p, state.config.momenta, rng);
            double kin = 0.0;
            for (const double y : state.config.momenta) kin += y * y;
            const double h_before = state.energy + 0.5 * kin;
            const VerletResult v = verlet_step_cached(
                model, p, state.config, state.grad, grad_next);
            if (!v.valid) break;  // coincidence: stop this dt, keep the mean
            kin = 0.0;
            for (const double y : state.config.momenta) kin += y * y;
            sum_abs += std::abs(v.energy + 0.5 * kin - h_before);
            ++counted;
            state.energy = v.energy;
            std::swap(state.grad, grad_next);
        }
        if (counted == 0)
            throw std::runtime_error(
                "energy scaling study: no valid step at dt = " +
                std::to_string(p.dt));
        metric.push_back(sum_abs / static_cast<double>(counted));
    }
    return fit_loglog(dt_list, metric);
}

std::vector<double> max_modulus_series(const ChainOutput& output) {
    std::vector<double> maxima;
    maxima.reserve(output.samples.size());
    const int d = output.dim;
    for (const auto& sample : output.samples) {
        double best = 0.0;
        for (std::size_t i = 0; i + d <= sample.size(); i += d) {
            double r2 = 0.0;
            for (int c = 0; c < d; ++c) r2 += sample[i + c] * sample[i + c];
            best = std::max(best, r2);
        }
        maxima.push_back(std::sqrt(best));
    }
    return maxima;
}

GumbelFit fit_gumbel(std::span<const double> values, bool mle) {
    if (values.size() < 2)
        throw std::invalid_argument("need at least 2 values to fit");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    var /= n;
    if (var == 0.0) throw std::invalid_argument("zero variance");

    GumbelFit fit;
    fit.scale = std::sqrt(6.0 * var) / std::numbers::pi;
    fit.location = mean - kEulerGamma * fit.scale;

    if (mle) {
        // The profile likelihood reduces to one equation in the scale:
        //   s = mean(x) - sum x_i e^{-x_i/s} / sum e^{-x_i/s}.
        auto residual = [&](double s) {
            double num = 0.0, den = 0.0;
            for (const double v : values) {
                const double w = std::exp(-(v - mean) / s);
                num += v * w;
                den += w;
            }
            return s - (mean - num / den);
        };
        double lo = fit.scale / 4.0, hi = fit.scale * 4.0;
        double flo = residual(lo), fhi = residual(hi);
        if (flo * fhi < 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = residual(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                    fhi = fm;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double s = 0.5 * (lo + hi);
            double den = 0.0;
            for (const double v : values) den += std::exp(-(v - mean) / s);
            fit.scale = s;
            // mu = -s log((1/n) sum e^{-x_i/s}), written around the mean.
            fit.location = mean - s * std::log(den / n);
            fit.method = "mle";
        }
    }
    fit.ks_statistic = ks_statistic(values, [&fit](double x) {
        return gumbel_cdf(x, fit.location, fit.scale);
    });
    return fit;
}

double ks_statistic(std::span<const double> values,
                    const std::function<double(double)>& cdf) {
    if (values.empty()) throw std::invalid_argument("empty value set");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        sup = std::max(sup, std::abs(f - (i + 1) / n));
        sup = std::max(sup, std::abs(f - i / n));
    }
    return sup;
}

DensityDistance density_distance(const Histogram& hist,
                                 const DensityOracle& oracle) {
    DensityDistance d;
    for (int b = 0; b < hist.n_bins(); ++b) {
        const double gap = std::abs(hist.density[b] - oracle.pdf(hist.mid(b)));
        d.sup_gap = std::max(d.sup_gap, gap);
        d.l1_gap += gap * hist.width(b);
    }
    return d;
}

std::pair<double, double> default_histogram_range(const DensityOracle& o) {
    const double pad = 0.05 * (o.hi - o.lo);
    return {o.lo - pad, o.hi + pad};
}

}  // namespace gasforge
