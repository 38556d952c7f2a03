#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gasforge/experiment.hpp"

using namespace gasforge;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kBaseline = R"({
    "model": "gue", "beta": 2, "N": 8,
    "sampler": "hmc", "dt": 0.5, "T": 100,
    "thinning": 2, "study": "density", "out": "tmp_exp"
})";

}  // namespace

TEST_CASE("parse accepts a complete config and applies defaults") {
    const ExperimentConfig c = parse_config(kBaseline);
    CHECK(c.model == "gue");
    CHECK(c.n == 8);
    CHECK(c.dt == 0.5);
    CHECK(c.total_time == 100);
    CHECK(c.thinning == 2);
    CHECK(c.study == "density");
    CHECK(c.burn_in_fraction == 0.5);  // default
    CHECK(c.n_chains == 1);            // default
    CHECK(c.seed == 42);               // default
    CHECK(c.n_steps() == 200);
}

TEST_CASE("parse errors name the offending key") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("(no error)");
    };
    CHECK(message("{") != "(no error)");  // malformed JSON
    const std::string missing = message("{}");
    CHECK(missing.find("model") != std::string::npos);
    CHECK(missing.find("N") != std::string::npos);
    CHECK(missing.find("study") != std::string::npos);
    CHECK(message(R"({"model":"gue","N":8,"study":"density","turbo":1})")
              .find("turbo") != std::string::npos);
    CHECK(message(R"({"model":"gue","N":"8","study":"density"})").find("N") !=
          std::string::npos);
    CHECK(message(R"({"model":"gue","N":-2,"study":"density"})").find("N") !=
          std::string::npos);
    CHECK(message(R"({"model":"gue","N":8,"study":"density","dt":0})")
              .find("dt") != std::string::npos);
    CHECK(message(R"({"model":"nope","N":8,"study":"density"})")
              .find("model") != std::string::npos);
    CHECK(message(
              R"({"model":"gue","N":8,"study":"rejection-scaling","dt_list":[0.1,0.2]})")
              .find("dt_list") != std::string::npos);
}

TEST_CASE("emit/parse round trip and stable hash") {
    ExperimentConfig c = parse_config(kBaseline);
    c.n_chains = 3;
    c.seed = 1234;
    c.dt_list = {0.5, 0.25, 0.125};
    const ExperimentConfig back = parse_config(emit_config(c));
    CHECK(back == c);
    CHECK(config_hash(back) == config_hash(c));
    ExperimentConfig other = c;
    other.seed = 1235;
    CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("known model list covers the presets") {
    const auto models = known_models();
    for (const char* name :
         {"gue", "ginibre", "quartic", "coulomb3d", "loggas3d"}) {
        bool found = false;
        for (const auto& m : models) found = found || m == name;
        CHECK(found);
    }
    for (const auto& m : models) CHECK_NOTHROW(GasModel::from_name(m, 2.0, 4));
}

TEST_CASE("a tiny run writes meta, histogram and samples, byte identical") {
    const ExperimentConfig c = parse_config(kBaseline);
    REQUIRE(run_experiment(c, 1) == 0);
    const std::string meta1 = slurp("tmp_exp_meta.json");
    const std::string hist1 = slurp("tmp_exp_histogram.csv");
    const std::string samp1 = slurp("tmp_exp_samples.csv");
    CHECK(meta1.find("config_hash") != std::string::npos);
    CHECK(meta1.find("\"model\": \"gue\"") != std::string::npos);
    CHECK(hist1.find("bin_mid") != std::string::npos);
    CHECK(hist1.find("oracle_density") != std::string::npos);
    CHECK(samp1.rfind("chain,step,particle,coord_0", 0) == 0);

    REQUIRE(run_experiment(c, 1) == 0);  // rerun: artifacts must not change
    CHECK(slurp("tmp_exp_meta.json") == meta1);
    CHECK(slurp("tmp_exp_histogram.csv") == hist1);
    CHECK(slurp("tmp_exp_samples.csv") == samp1);

    for (const char* f :
         {"tmp_exp_meta.json", "tmp_exp_histogram.csv", "tmp_exp_samples.csv"})
        std::remove(f);
}

TEST_CASE("scaling study writes the dt/metric table") {
    ExperimentConfig c = parse_config(kBaseline);
    c.study = "energy-scaling";
    c.dt_list = {0.2, 0.1, 0.05};
    c.total_time = 20;
    c.out = "tmp_scal";
    REQUIRE(run_experiment(c, 1) == 0);
    const std::string csv = slurp("tmp_scal_scaling.csv");
    CHECK(csv.rfind("dt,metric", 0) == 0);
    const std::string meta = slurp("tmp_scal_meta.json");
    CHECK(meta.find("slope") != std::string::npos);
    std::remove("tmp_scal_scaling.csv");
    std::remove("tmp_scal_meta.json");
}

TEST_CASE("edge study writes the maxima series") {
    ExperimentConfig c = parse_config(kBaseline);
    c.model = "ginibre";
    c.study = "edge-gumbel";
    c.total_time = 50;
    c.dt = 0.1;
    c.thinning = 10;
    c.n_chains = 2;
    c.out = "tmp_edge";
    REQUIRE(run_experiment(c, 1) == 0);
    const std::string csv = slurp("tmp_edge_maxima.csv");
    CHECK(csv.rfind("chain,step,max_modulus", 0) == 0);
    std::remove("tmp_edge_maxima.csv");
    std::remove("tmp_edge_meta.json");
}
