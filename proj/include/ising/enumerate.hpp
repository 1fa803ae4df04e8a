#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ising/boundary.hpp"
#include "ising/lattice.hpp"

namespace ising {

inline constexpr int kEnumerationCap = 24;

// Finite set of free spins with unit ferromagnetic couplings and integer
// external fields (the frozen neighbours). Energy
//   H(s) = - sum_{bonds} s_i s_j - sum_i h_i s_i.
struct SpinSystem {
    std::vector<Site> sites;               // free sites, index = bit position
    std::vector<std::vector<int>> nbr;     // free neighbours of each site
    std::vector<int> field;                // sum of frozen neighbour spins
    int bonds = 0;                         // free-free bonds

    int size() const { return static_cast<int>(sites.size()); }
    int max_abs_energy() const;
    // Energy of the configuration encoded by bits (bit set means -1).
    int energy(std::uint32_t bits) const;
    int index_of(Site s) const;

    // Free sites with neighbour values given by `frozen` (0 means no
    // coupling, e.g. free boundary).
    static SpinSystem build(const std::vector<Site>& free_sites, const std::function<int(Site)>& frozen);
    static SpinSystem box(const BoundaryCondition& bc);
};

// Exact count of configurations per (class, energy). The class of a
// configuration is its restricted configuration on `support` (Restricted)
// or the parity of the number of -1 spins on `support` (Parity).
struct EnergyHistogram {
    enum class Mode { Restricted, Parity };

    int emax = 0;      // energies lie in [-emax, emax]
    int classes = 1;
    std::vector<std::uint64_t> counts;  // counts[c * levels() + (E + emax)]

    int levels() const { return 2 * emax + 1; }
    std::uint64_t at(int cls, int energy) const { return counts[static_cast<std::size_t>(cls) * levels() + energy + emax]; }
    std::uint64_t total() const;
    int min_energy() const;

    // log sum_{c, E} weight(c) * count * exp(-beta E); weight 1 if empty.
    double log_sum(double beta, const std::vector<double>& class_weight = {}) const;
    double log_partition(double beta) const { return log_sum(beta); }
    // sum_c f(c) Z_c / Z.
    double expectation(double beta, const std::vector<double>& class_value) const;
    // log Z restricted to one class.
    double log_class_partition(double beta, int cls) const;
};

struct EnumerationOptions {
    std::vector<int> support;  // indices into SpinSystem::sites
    EnergyHistogram::Mode mode = EnergyHistogram::Mode::Restricted;
};

// Gray-code enumeration, chunked and reduced with OpenMP. Integer counts make
// the result independent of the thread count.
EnergyHistogram enumerate_histogram(const SpinSystem& sys, const EnumerationOptions& opt = {});

// Serial reference: direct energy evaluation of every configuration.
EnergyHistogram enumerate_histogram_reference(const SpinSystem& sys, const EnumerationOptions& opt = {});

}  // namespace ising
