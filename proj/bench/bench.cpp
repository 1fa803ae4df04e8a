#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "ising/boundary.hpp"
#include "ising/enumerate.hpp"
#include "ising/sampler.hpp"

using namespace ising;

namespace {

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int sweeps = argc > 1 ? std::atoi(argv[1]) : 200;
    std::printf("%-28s %8s %14s %14s %8s\n", "kernel", "size", "parallel_s", "reference_s", "speedup");
    for (int n : {16, 32, 64, 128}) {
        const auto bc = BoundaryCondition::dobrushin(BoxSpec{n}.rect());
        const CounterRng rng(1, 0);
        SpinConfiguration a = SpinConfiguration::extend_boundary(bc), b = a;
        const double tp = seconds([&] {
            for (int s = 0; s < sweeps; ++s) glauber_sweep(a, 0.7, rng, s);
        });
        const double tr = seconds([&] {
            for (int s = 0; s < sweeps; ++s) glauber_sweep_reference(b, 0.7, rng, s);
        });
        std::printf("%-28s %8d %14.6f %14.6f %8.2f%s\n", "heat-bath sweep", n, tp / sweeps, tr / sweeps, tr / tp,
                    a == b ? "" : "  MISMATCH");
    }
    for (int n : {16, 20, 22}) {
        std::vector<Site> sites;
        for (int k = 0; k < n; ++k) sites.push_back({k % 5, k / 5});
        const auto sys = SpinSystem::build(sites, [](Site) { return 1; });
        EnergyHistogram h1, h2;
        const double tp = seconds([&] { h1 = enumerate_histogram(sys); });
        const double tr = seconds([&] { h2 = enumerate_histogram_reference(sys); });
        std::printf("%-28s %8d %14.6f %14.6f %8.2f%s\n", "enumeration", n, tp, tr, tr / tp,
                    h1.counts == h2.counts ? "" : "  MISMATCH");
    }
    return 0;
}
