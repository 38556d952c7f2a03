#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gasforge/samplers.hpp"

using namespace gasforge;

namespace {

SamplerParams base_params(const GasModel& m, double dt, long long n_steps) {
    SamplerParams p;
    p.dt = dt;
    p.beta_n = m.beta_n;
    p.n_steps = n_steps;
    return p;
}

}  // namespace

TEST_CASE("sampler names round trip") {
    for (const SamplerKind k :
         {SamplerKind::Hmc, SamplerKind::Mala, SamplerKind::Ula,
          SamplerKind::TamedUla}) {
        CHECK(sampler_from_name(sampler_name(k)) == k);
    }
    CHECK(sampler_is_kinetic(SamplerKind::Hmc));
    CHECK(!sampler_is_kinetic(SamplerKind::Mala));
    CHECK_THROWS(sampler_from_name("nope"));
}

TEST_CASE("mala log ratio is antisymmetric") {
    const GasModel m = GasModel::beta_ginibre(2.0, 4);
    SamplerParams p = base_params(m, 0.07, 1);
    Rng rng(5);
    const Configuration a = random_initial(m, rng, false);
    const Configuration b = random_initial(m, rng, false);
    std::vector<double> ga(m.dof()), gb(m.dof());
    const EnergyGrad ea = energy_and_grad(m, a, ga);
    const EnergyGrad eb = energy_and_grad(m, b, gb);
    REQUIRE(ea.valid);
    REQUIRE(eb.valid);
    const double fwd = mala_log_ratio(p, a.positions, ea.energy, ga,
                                      b.positions, eb.energy, gb);
    const double bwd = mala_log_ratio(p, b.positions, eb.energy, gb,
                                      a.positions, ea.energy, ga);
    CHECK(std::abs(fwd + bwd) <= 1e-10);
}

TEST_CASE("mala log ratio is minus infinity at an infinite target energy") {
    const GasModel m = GasModel::beta_hermite(2.0, 2);
    SamplerParams p = base_params(m, 0.1, 1);
    const std::vector<double> pos_a = {-1.0, 1.0}, pos_b = {0.0, 0.0};
    const std::vector<double> ga = {0.1, -0.1}, gb = {0.0, 0.0};
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(mala_log_ratio(p, pos_a, 0.3, ga, pos_b, inf, gb) == -inf);
}

TEST_CASE("hmc rejection keeps the position and negates the refreshed momentum") {
    const GasModel m = GasModel::beta_hermite(2.0, 2);
    // A wildly unstable step: the proposal energy explodes, so the
    // correction rejects with probability one.
    SamplerParams p = base_params(m, 100.0, 1);
    Rng rng(99);
    Configuration init = random_initial(m, rng, true);
    ChainState state = ChainState::make(m, init);

    Rng replay = rng;  // same stream: predict the refreshed momentum
    std::vector<double> noise(m.dof());
    fill_gaussian(replay, noise);
    const double eta = p.eta();
    const double s = std::sqrt((1.0 - eta * eta) / p.beta_n);
    std::vector<double> refreshed(m.dof());
    for (std::size_t k = 0; k < m.dof(); ++k)
        refreshed[k] = eta * init.momenta[k] + s * noise[k];

    ChainOutput stats;
    const bool accepted = hmc_step(m, p, state, rng, &stats);
    CHECK(!accepted);
    CHECK(stats.n_accepted == 0);
    CHECK(stats.n_rejected + stats.n_invalid == 1);
    for (std::size_t k = 0; k < m.dof(); ++k) {
        CHECK(state.config.positions[k] == init.positions[k]);
        CHECK(state.config.momenta[k] == -refreshed[k]);
    }
}

TEST_CASE("hmc bookkeeping: proposals split into accepted/rejected/invalid") {
    const GasModel m = GasModel::beta_hermite(2.0, 4);
    SamplerParams p = base_params(m, 0.4, 500);
    Rng rng(3);
    const ChainOutput out =
        run_chain(m, p, SamplerKind::Hmc, random_initial(m, rng, true), rng);
    CHECK(out.n_proposals == 500);
    CHECK(out.n_accepted + out.n_rejected + out.n_invalid == out.n_proposals);
    CHECK(out.acceptance_rate ==
          doctest::Approx(static_cast<double>(out.n_accepted) /
                          out.n_proposals));
    CHECK(out.n_accepted > 0);
}

TEST_CASE("recording arithmetic: burn-in then thinning") {
    const GasModel m = GasModel::beta_hermite(2.0, 2);
    SamplerParams p = base_params(m, 0.2, 10);
    p.burn_in_fraction = 0.5;
    p.thinning = 1;
    Rng rng(11);
    const ChainOutput out =
        run_chain(m, p, SamplerKind::Hmc, random_initial(m, rng, true), rng);
    REQUIRE(out.samples.size() == 5);
    CHECK(out.sample_steps == std::vector<long long>{6, 7, 8, 9, 10});
    CHECK(out.energy_trace.size() == 5);

    p.thinning = 2;
    Rng rng2(11);
    const ChainOutput thinned = run_chain(m, p, SamplerKind::Hmc,
                                          random_initial(m, rng2, true), rng2);
    CHECK(thinned.sample_steps == std::vector<long long>{7, 9});
}

TEST_CASE("same seed gives bitwise identical chains") {
    const GasModel m = GasModel::beta_ginibre(2.0, 5);
    SamplerParams p = base_params(m, 0.1, 200);
    for (const SamplerKind k : {SamplerKind::Hmc, SamplerKind::Mala,
                                SamplerKind::Ula, SamplerKind::TamedUla}) {
        Rng ra(123), rb(123);
        const bool kinetic = sampler_is_kinetic(k);
        const ChainOutput a =
            run_chain(m, p, k, random_initial(m, ra, kinetic), ra);
        const ChainOutput b =
            run_chain(m, p, k, random_initial(m, rb, kinetic), rb);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            CHECK(a.samples[i] == b.samples[i]);
        CHECK(a.energy_trace == b.energy_trace);
        CHECK(a.n_accepted == b.n_accepted);
    }
}

TEST_CASE("ensemble results do not depend on the worker count") {
    const GasModel m = GasModel::beta_hermite(2.0, 4);
    SamplerParams p = base_params(m, 0.2, 100);
    const auto one = run_ensemble(m, p, SamplerKind::Hmc, 4, 7, 1);
    const auto many = run_ensemble(m, p, SamplerKind::Hmc, 4, 7, 3);
    REQUIRE(one.size() == 4);
    REQUIRE(many.size() == 4);
    for (int c = 0; c < 4; ++c) {
        REQUIRE(one[c].samples.size() == many[c].samples.size());
        for (std::size_t i = 0; i < one[c].samples.size(); ++i)
            CHECK(one[c].samples[i] == many[c].samples[i]);
        CHECK(one[c].n_accepted == many[c].n_accepted);
    }
}

TEST_CASE("a one-chain ensemble replays run_chain with the derived seed") {
    const GasModel m = GasModel::beta_ginibre(2.0, 3);
    SamplerParams p = base_params(m, 0.1, 80);
    const std::uint64_t master = 2026;
    const auto ens = run_ensemble(m, p, SamplerKind::Mala, 1, master, 1);
    Rng rng(derive_seed(master, 0));
    const ChainOutput direct =
        run_chain(m, p, SamplerKind::Mala, random_initial(m, rng, false), rng);
    REQUIRE(ens.size() == 1);
    REQUIRE(ens[0].samples.size() == direct.samples.size());
    for (std::size_t i = 0; i < direct.samples.size(); ++i)
        CHECK(ens[0].samples[i] == direct.samples[i]);
}

TEST_CASE("hmc reproduces the single-particle stationary variance") {
    // N=1, beta=2: the target is exp(-x^2/2), unit variance.
    const GasModel m = GasModel::beta_hermite(2.0, 1);
    SamplerParams p = base_params(m, 0.7, 200000);
    Rng rng(8);
    const ChainOutput out =
        run_chain(m, p, SamplerKind::Hmc, random_initial(m, rng, true), rng);
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : out.samples) {
        sum += s[0];
        sum2 += s[0] * s[0];
    }
    const double n = static_cast<double>(out.samples.size());
    const double var = sum2 / n - (sum / n) * (sum / n);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("mala matches hmc on the two-particle second moment") {
    const GasModel m = GasModel::beta_hermite(2.0, 2);
    SamplerParams p = base_params(m, 0.3, 200000);
    auto second_moment = [&](SamplerKind k) {
        Rng rng(21);
        const ChainOutput out = run_chain(
            m, p, k, random_initial(m, rng, sampler_is_kinetic(k)), rng);
        double sum2 = 0.0;
        long long n = 0;
        for (const auto& s : out.samples)
            for (const double x : s) {
                sum2 += x * x;
                ++n;
            }
        return sum2 / n;
    };
    const double hmc = second_moment(SamplerKind::Hmc);
    const double mala = second_moment(SamplerKind::Mala);
    CHECK(std::abs(hmc - mala) < 0.1 * std::max(hmc, mala));
}

TEST_CASE("unadjusted chain aborts cleanly when the drift diverges") {
    const GasModel m = GasModel::quartic(1);
    SamplerParams p = base_params(m, 1.0, 50);
    Configuration init;
    init.n_particles = 1;
    init.dim = 1;
    init.positions = {10.0};  // Euler on x^3 drift blows up immediately
    Rng rng(1);
    const ChainOutput out = run_chain(m, p, SamplerKind::Ula, init, rng);
    CHECK(out.aborted);
    CHECK(!out.abort_message.empty());
    CHECK(out.steps_run < p.n_steps);
}

TEST_CASE("the tamed chain survives the same divergent start") {
    const GasModel m = GasModel::quartic(1);
    SamplerParams p = base_params(m, 1.0, 50);
    Configuration init;
    init.n_particles = 1;
    init.dim = 1;
    init.positions = {10.0};
    Rng rng(1);
    const ChainOutput out = run_chain(m, p, SamplerKind::TamedUla, init, rng);
    CHECK(!out.aborted);
    CHECK(out.steps_run == p.n_steps);
    for (const auto& s : out.samples) CHECK(std::isfinite(s[0]));
}
