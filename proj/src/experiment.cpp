#include "gasforge/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "gasforge/diagnostics.hpp"
#include "gasforge/kernels.hpp"
#include "gasforge/oracles.hpp"

namespace gasforge {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

const std::set<std::string> kKnownKeys = {
    "model",    "beta",     "N",          "sampler",  "dt",
    "alpha",    "gamma",    "T",          "burn_in_fraction",
    "thinning", "n_chains", "seed",       "study",    "dt_list",
    "bins",     "r_max",    "out"};

const std::set<std::string> kStudies = {"density", "radial-density",
                                        "rejection-scaling",
                                        "energy-scaling", "edge-gumbel"};

template <typename T>
T get_key(const json& j, const std::string& key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + key + "' has the wrong type");
    }
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) throw ConfigError(key + " must be positive");
}

// Fixed-format double so reruns are byte identical.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

}  // namespace

long long ExperimentConfig::n_steps() const {
    return static_cast<long long>(std::ceil(total_time / dt));
}

GasModel ExperimentConfig::make_model() const {
    return GasModel::from_name(model, beta, n);
}

SamplerParams ExperimentConfig::make_params(const GasModel& m) const {
    SamplerParams p;
    p.dt = dt;
    p.alpha = alpha;
    p.gamma = gamma;
    p.beta_n = m.beta_n;
    p.n_steps = n_steps();
    p.seed = seed;
    p.burn_in_fraction = burn_in_fraction;
    p.thinning = thinning;
    return p;
}

std::vector<std::string> known_models() {
    return {"gue", "ginibre", "quartic", "coulomb3d", "loggas3d"};
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    for (const auto& [key, value] : j.items())
        if (!kKnownKeys.contains(key))
            throw ConfigError("unknown key '" + key + "'");

    std::string missing;
    for (const char* key : {"model", "N", "study"})
        if (!j.contains(key)) missing += std::string(missing.empty() ? "" : ", ") + key;
    if (!missing.empty())
        throw ConfigError("missing required keys: " + missing);

    ExperimentConfig c;
    c.model = get_key<std::string>(j, "model", "");
    c.beta = get_key<double>(j, "beta", c.beta);
    c.n = get_key<int>(j, "N", 0);
    c.sampler = get_key<std::string>(j, "sampler", c.sampler);
    c.dt = get_key<double>(j, "dt", c.dt);
    c.alpha = get_key<double>(j, "alpha", c.alpha);
    c.gamma = get_key<double>(j, "gamma", c.gamma);
    c.total_time = get_key<double>(j, "T", c.total_time);
    c.burn_in_fraction =
        get_key<double>(j, "burn_in_fraction", c.burn_in_fraction);
    c.thinning = get_key<long long>(j, "thinning", c.thinning);
    c.n_chains = get_key<int>(j, "n_chains", c.n_chains);
    c.seed = get_key<std::uint64_t>(j, "seed", c.seed);
    c.study = get_key<std::string>(j, "study", "");
    c.dt_list = get_key<std::vector<double>>(j, "dt_list", {});
    c.bins = get_key<int>(j, "bins", c.bins);
    c.r_max = get_key<double>(j, "r_max", c.r_max);
    c.out = get_key<std::string>(j, "out", c.out);

    bool model_known = false;
    for (const auto& m : known_models()) model_known |= (m == c.model);
    if (!model_known) throw ConfigError("unknown model '" + c.model + "'");
    if (c.n < 1) throw ConfigError("N must be >= 1");
    require_positive(c.beta, "beta");
    require_positive(c.dt, "dt");
    require_positive(c.alpha, "alpha");
    if (c.gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    require_positive(c.total_time, "T");
    if (c.burn_in_fraction < 0.0 || c.burn_in_fraction >= 1.0)
        throw ConfigError("burn_in_fraction must be in [0, 1)");
    if (c.thinning < 1) throw ConfigError("thinning must be >= 1");
    if (c.n_chains < 1) throw ConfigError("n_chains must be >= 1");
    if (!kStudies.contains(c.study))
        throw ConfigError("unknown study '" + c.study + "'");
    if (c.bins < 1) throw ConfigError("bins must be >= 1");
    if (c.r_max < 0.0) throw ConfigError("r_max must be nonnegative");
    sampler_from_name(c.sampler);  // throws on unknown sampler
    if ((c.study == "rejection-scaling" || c.study == "energy-scaling")) {
        if (c.dt_list.size() < 3)
            throw ConfigError("dt_list needs at least 3 values");
        for (const double v : c.dt_list) require_positive(v, "dt_list entry");
    }
    return c;
}

namespace {

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["model"] = c.model;
    j["beta"] = c.beta;
    j["N"] = c.n;
    j["sampler"] = c.sampler;
    j["dt"] = c.dt;
    j["alpha"] = c.alpha;
    j["gamma"] = c.gamma;
    j["T"] = c.total_time;
    j["burn_in_fraction"] = c.burn_in_fraction;
    j["thinning"] = c.thinning;
    j["n_chains"] = c.n_chains;
    j["seed"] = c.seed;
    j["study"] = c.study;
    j["dt_list"] = c.dt_list;
    j["bins"] = c.bins;
    j["r_max"] = c.r_max;
    j["out"] = c.out;
    return j;
}

}  // namespace

std::string emit_config(const ExperimentConfig& config) {
    return config_to_json(config).dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    // FNV-1a over the canonical dump.
    const std::string text = config_to_json(config).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

void write_samples_csv(const std::string& path,
                       const std::vector<ChainOutput>& outputs, int d) {
    CsvWriter csv(path);
    std::vector<std::string> header = {"chain", "step", "particle"};
    for (int c = 0; c < d; ++c) header.push_back("coord_" + std::to_string(c));
    csv.row(header);
    for (std::size_t chain = 0; chain < outputs.size(); ++chain) {
        const ChainOutput& out = outputs[chain];
        for (std::size_t s = 0; s < out.samples.size(); ++s)
            for (int p = 0; p < out.n_particles; ++p) {
                std::vector<std::string> row = {
                    std::to_string(chain),
                    std::to_string(out.sample_steps[s]),
                    std::to_string(p)};
                for (int c = 0; c < d; ++c)
                    row.push_back(fmt(out.samples[s][p * d + c]));
                csv.row(row);
            }
    }
}

void write_histogram_csv(const std::string& path, const Histogram& hist,
                         const std::optional<DensityOracle>& oracle) {
    CsvWriter csv(path);
    if (oracle)
        csv.row({"bin_mid", "density", "oracle_density"});
    else
        csv.row({"bin_mid", "density"});
    for (int b = 0; b < hist.n_bins(); ++b) {
        std::vector<std::string> row = {fmt(hist.mid(b)),
                                        fmt(hist.density[b])};
        if (oracle) row.push_back(fmt(oracle->pdf(hist.mid(b))));
        csv.row(row);
    }
}

json chain_stats_json(const std::vector<ChainOutput>& outputs) {
    json arr = json::array();
    for (const ChainOutput& out : outputs) {
        json c;
        c["acceptance_rate"] = out.acceptance_rate;
        c["steps_run"] = out.steps_run;
        c["n_invalid"] = out.n_invalid;
        c["n_samples"] = out.samples.size();
        c["aborted"] = out.aborted;
        if (out.aborted) c["abort_message"] = out.abort_message;
        arr.push_back(c);
    }
    return arr;
}

bool any_aborted(const std::vector<ChainOutput>& outputs) {
    for (const ChainOutput& out : outputs)
        if (out.aborted) return true;
    return false;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, int workers) {
    const GasModel model = config.make_model();
    const SamplerParams params = config.make_params(model);
    params.validate();
    const SamplerKind kind = sampler_from_name(config.sampler);

    json meta;
    meta["config"] = config_to_json(config);
    meta["config_hash"] = config_hash(config);
    meta["version"] = kVersion;
    meta["kernel"] = kernels::active_sweep_name();
    meta["beta_n"] = model.beta_n;
    meta["n_steps"] = params.n_steps;
    json files = json::array();

    int status = 0;
    const std::string prefix = config.out;

    if (config.study == "rejection-scaling" ||
        config.study == "energy-scaling") {
        const SlopeStudy study =
            config.study == "rejection-scaling"
                ? rejection_scaling_study(model, params, config.dt_list,
                                          config.total_time)
                : energy_scaling_study(model, params, config.dt_list,
                                       config.total_time);
        const std::string path = prefix + "_scaling.csv";
        CsvWriter csv(path);
        csv.row({"dt", "metric"});
        for (std::size_t i = 0; i < study.dt_values.size(); ++i)
            csv.row({fmt(study.dt_values[i]), fmt(study.metric_values[i])});
        files.push_back(path);
        meta["slope"] = study.slope;
        meta["intercept"] = study.intercept;
        meta["r_squared"] = study.r_squared;
    } else {
        const std::vector<ChainOutput> outputs = run_ensemble(
            model, params, kind, config.n_chains, config.seed, workers);
        meta["chains"] = chain_stats_json(outputs);
        if (any_aborted(outputs)) {
            status = 2;
            meta["partial"] = true;
        }

        if (config.study == "density") {
            if (model.particle_dim != 1)
                throw ConfigError(
                    "density study needs d = 1; use radial-density");
            const std::string spath = prefix + "_samples.csv";
            write_samples_csv(spath, outputs, model.particle_dim);
            files.push_back(spath);
            const std::vector<double> values = pooled_coordinates(outputs);
            const auto oracle = oracle_for_model(model, false);
            double lo, hi;
            if (oracle) {
                std::tie(lo, hi) = default_histogram_range(*oracle);
            } else {
                const auto [mn, mx] =
                    std::minmax_element(values.begin(), values.end());
                lo = *mn - 0.05 * (*mx - *mn);
                hi = *mx + 0.05 * (*mx - *mn);
            }
            const Histogram hist =
                build_histogram(values, config.bins, lo, hi);
            const std::string hpath = prefix + "_histogram.csv";
            write_histogram_csv(hpath, hist, oracle);
            files.push_back(hpath);
            if (oracle) {
                const DensityDistance dd = density_distance(hist, *oracle);
                meta["oracle"] = oracle->name;
                meta["l1_gap"] = dd.l1_gap;
                meta["sup_gap"] = dd.sup_gap;
            }
        } else if (config.study == "radial-density") {
            if (model.particle_dim < 2)
                throw ConfigError("radial-density study needs d >= 2");
            const std::string spath = prefix + "_samples.csv";
            write_samples_csv(spath, outputs, model.particle_dim);
            files.push_back(spath);
            const std::vector<double> radii = pooled_radii(outputs);
            const auto oracle = oracle_for_model(model, true);
            double r_max = config.r_max;
            if (r_max <= 0.0) {
                if (oracle) {
                    r_max = default_histogram_range(*oracle).second;
                } else {
                    r_max = 1.05 * *std::max_element(radii.begin(),
                                                     radii.end());
                }
            }
            const Histogram hist =
                build_histogram(radii, config.bins, 0.0, r_max);
            const std::string hpath = prefix + "_histogram.csv";
            write_histogram_csv(hpath, hist, oracle);
            files.push_back(hpath);
            if (oracle) {
                const DensityDistance dd = density_distance(hist, *oracle);
                meta["oracle"] = oracle->name;
                meta["l1_gap"] = dd.l1_gap;
                meta["sup_gap"] = dd.sup_gap;
            }
        } else {  // edge-gumbel
            const std::string mpath = prefix + "_maxima.csv";
            CsvWriter csv(mpath);
            csv.row({"chain", "step", "max_modulus"});
            std::vector<double> all_maxima;
            for (std::size_t chain = 0; chain < outputs.size(); ++chain) {
                const auto maxima = max_modulus_series(outputs[chain]);
                for (std::size_t s = 0; s < maxima.size(); ++s) {
                    csv.row({std::to_string(chain),
                             std::to_string(outputs[chain].sample_steps[s]),
                             fmt(maxima[s])});
                    all_maxima.push_back(maxima[s]);
                }
            }
            files.push_back(mpath);
            if (all_maxima.size() >= 30) {
                const GumbelFit fit = fit_gumbel(all_maxima);
                meta["gumbel_location"] = fit.location;
                meta["gumbel_scale"] = fit.scale;
                meta["gumbel_method"] = fit.method;
                meta["ks_statistic"] = fit.ks_statistic;
                meta["n_maxima"] = all_maxima.size();
            } else {
                meta["n_maxima"] = all_maxima.size();
                meta["gumbel_fit_skipped"] = "fewer than 30 maxima";
            }
        }
    }

    meta["files"] = files;
    std::ofstream mf(prefix + "_meta.json");
    if (!mf) throw std::runtime_error("cannot open " + prefix + "_meta.json");
    mf << meta.dump(2) << '\n';
    return status;
}

}  // namespace gasforge
