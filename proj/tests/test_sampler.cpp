#include <doctest.h>

#include <cmath>

#include "ising/gibbs.hpp"
#include "ising/sampler.hpp"

using namespace ising;

TEST_CASE("parallel sweep is bit-identical to the reference") {
    for (int n : {1, 4, 9}) {
        for (double beta : {0.2, 0.7}) {
            const auto bc = BoundaryCondition::bernoulli(BoxSpec{n}.rect(), 0.4, 11);
            SpinConfiguration a(bc), b(bc);
            const CounterRng rng(5, 2);
            for (std::uint64_t t = 0; t < 50; ++t) {
                glauber_sweep(a, beta, rng, t);
                glauber_sweep_reference(b, beta, rng, t);
            }
            CHECK(a == b);
            CHECK(a.packed() == b.packed());
        }
    }
}

TEST_CASE("heat-bath thresholds") {
    CHECK(heat_bath_threshold(0.0, 0) == heat_bath_threshold(0.0, 4));
    for (int h = -4; h < 4; h += 2) CHECK(heat_bath_threshold(0.5, h) < heat_bath_threshold(0.5, h + 2));
}

TEST_CASE("chains are deterministic in (seed, replica)") {
    ChainSpec spec;
    spec.bc = BoundaryCondition::dobrushin(BoxSpec{3}.rect());
    spec.beta = 0.6;
    spec.sweeps = 2000;
    spec.burn_in = 100;
    const std::vector<Observable> obs{Observable::local(LocalFunction::spin({0, 0}))};
    const auto a = run_chain_full(spec, obs);
    const auto b = run_chain_full(spec, obs);
    CHECK(a.series == b.series);
    CHECK(a.final_state == b.final_state);
    spec.replica = 1;
    CHECK(run_chain_full(spec, obs).series != a.series);
}

TEST_CASE("sampled sigma_0 agrees with the exact value") {
    const auto bc = BoundaryCondition::plus(BoxSpec{1}.rect());
    const auto s0 = LocalFunction::spin({0, 0});
    const double exact = expectation(make_oracle(bc, 0.5), s0);
    ChainSpec spec;
    spec.bc = bc;
    spec.beta = 0.5;
    spec.sweeps = 200000;
    spec.burn_in = 1000;
    spec.seed = 3;
    const auto st = run_chain(spec, {Observable::local(s0)});
    CHECK(std::abs(st[0].mean - exact) < 4 * st[0].std_error);
    CHECK(st[0].std_error < 5e-3);
}

TEST_CASE("initial states") {
    ChainSpec spec;
    spec.bc = BoundaryCondition::quadrant(BoxSpec{2}.rect());
    spec.init = InitialState::AllMinus;
    const auto c = initial_configuration(spec);
    for (const auto& s : box_sites(BoxSpec{2})) CHECK(c.spin(s) == -1);
    spec.init = InitialState::AllPlus;
    CHECK(initial_configuration(spec).spin(0, 0) == 1);
}
