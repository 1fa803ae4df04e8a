#pragma once

#include <cstdint>

namespace ising {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based generator: SplitMix64 evaluated at an arbitrary position of
// the Weyl sequence. The stream key depends on (seed, replica); the counter
// on (sweep, site). Draws never depend on the order in which they are made.
class CounterRng {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    CounterRng(std::uint64_t seed, std::uint64_t replica)
        : key_(mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) + replica * kGamma + 0x14057b7ef767814fULL)) {}

    std::uint64_t bits(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGamma); }

    std::uint64_t bits(std::uint64_t sweep, std::uint64_t site, std::uint64_t sites_per_sweep) const {
        return bits(sweep * sites_per_sweep + site);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

}  // namespace ising
