#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ising/boundary.hpp"
#include "ising/rng.hpp"
#include "ising/spins.hpp"
#include "ising/stats.hpp"

namespace ising {

enum class InitialState { AllPlus, AllMinus, ExtendBoundary };

struct ChainSpec {
    BoundaryCondition bc;
    double beta = 0.0;
    std::uint64_t seed = 1;
    long long burn_in = 0;
    long long sweeps = 1;
    int thin = 1;
    std::uint64_t replica = 0;
    InitialState init = InitialState::ExtendBoundary;
};

// 20 n sweeps when the boundary condition has sign changes, 2 n otherwise.
long long default_burn_in(const BoundaryCondition& bc);

struct Observable {
    std::string name;
    std::function<double(const SpinConfiguration&)> fn;

    static Observable local(const LocalFunction& f, std::string name = "f");
};

// Heat-bath threshold: the new spin is +1 iff the 64-bit draw is below
// threshold(beta, h), h the local field.
std::uint64_t heat_bath_threshold(double beta, int h);

// One checkerboard sweep (even x+y sites, then odd) with the OpenMP kernel.
void glauber_sweep(SpinConfiguration& c, double beta, const CounterRng& rng, std::uint64_t sweep);
// Serial reference kernel; produces the same configuration as glauber_sweep.
void glauber_sweep_reference(SpinConfiguration& c, double beta, const CounterRng& rng, std::uint64_t sweep);

struct ChainResult {
    std::vector<std::vector<double>> series;  // per observable, one value per thinned sweep
    std::vector<SampleStats> stats;
    std::vector<double> half_drift;  // |first half - second half| / combined error
    SpinConfiguration final_state;
};

// Several outputs computed from one snapshot (e.g. sharing a contour
// extraction).
struct MultiObservable {
    std::vector<std::string> names;
    std::function<void(const SpinConfiguration&, std::vector<double>&)> fn;
};

ChainResult run_chain_multi(const ChainSpec& spec, const MultiObservable& obs);
ChainResult run_chain_full(const ChainSpec& spec, const std::vector<Observable>& obs);
std::vector<SampleStats> run_chain(const ChainSpec& spec, const std::vector<Observable>& obs);

// Replica r runs with CounterRng(spec.seed, r). Pooled mean is the average of
// replica means; the error combines all replica batch means.
std::vector<SampleStats> parallel_chains(const ChainSpec& spec, int replicas, const std::vector<Observable>& obs);

SpinConfiguration initial_configuration(const ChainSpec& spec);

}  // namespace ising
