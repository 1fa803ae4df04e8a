#include "ising/sampler.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "ising/errors.hpp"

namespace ising {

long long default_burn_in(const BoundaryCondition& bc) {
    const Rect& r = bc.rect();
    const long long n = std::max(r.width(), r.height()) / 2;
    return bc.sign_changes().empty() ? 2 * std::max(1LL, n) : 20 * std::max(1LL, n);
}

Observable Observable::local(const LocalFunction& f, std::string name) {
    return Observable{std::move(name), [f](const SpinConfiguration& c) { return f(c); }};
}

std::uint64_t heat_bath_threshold(double beta, int h) {
    const double p = 1.0 / (1.0 + std::exp(-2.0 * beta * h));
    if (p >= 1.0) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

void glauber_sweep(SpinConfiguration& c, double beta, const CounterRng& rng, std::uint64_t sweep) {
    const Rect r = c.rect();
    const int w = r.width(), h = r.height(), stride = c.stride();
    const std::uint64_t n_sites = static_cast<std::uint64_t>(w) * h;
    std::uint64_t thr[9];
    for (int k = -4; k <= 4; ++k) thr[k + 4] = heat_bath_threshold(beta, k);
    std::int8_t* g = c.data();
    const std::uint64_t base = sweep * n_sites;
    for (int color = 0; color < 2; ++color) {
#pragma omp parallel for schedule(static) if (h >= 64 && !omp_in_parallel())
        for (int j = 0; j < h; ++j) {
            const int y = r.y0 + j;
            const int i0 = (color - (r.x0 + y)) & 1;
            std::int8_t* row = g + static_cast<std::size_t>(j + 1) * stride + 1;
            const std::uint64_t rbase = base + static_cast<std::uint64_t>(j) * w;
            for (int i = i0; i < w; i += 2) {
                std::int8_t* p = row + i;
                const int loc = p[-1] + p[1] + p[-stride] + p[stride];
                p[0] = rng.bits(rbase + i) < thr[loc + 4] ? 1 : -1;
            }
        }
    }
}

void glauber_sweep_reference(SpinConfiguration& c, double beta, const CounterRng& rng, std::uint64_t sweep) {
    const Rect r = c.rect();
    const std::uint64_t n_sites = static_cast<std::uint64_t>(r.size());
    for (int color = 0; color < 2; ++color) {
        for (int y = r.y0; y <= r.y1; ++y) {
            for (int x = r.x0; x <= r.x1; ++x) {
                if (((x + y) & 1) != color) continue;
                const int loc = c.spin(x + 1, y) + c.spin(x - 1, y) + c.spin(x, y + 1) + c.spin(x, y - 1);
                const std::uint64_t u = rng.bits(sweep, static_cast<std::uint64_t>(r.index({x, y})), n_sites);
                c.set({x, y}, u < heat_bath_threshold(beta, loc) ? 1 : -1);
            }
        }
    }
}

SpinConfiguration initial_configuration(const ChainSpec& spec) {
    switch (spec.init) {
        case InitialState::AllPlus: return SpinConfiguration(spec.bc);
        case InitialState::AllMinus: {
            SpinConfiguration c(spec.bc);
            for (const Site& s : rect_sites(spec.bc.rect())) c.set(s, -1);
            return c;
        }
        case InitialState::ExtendBoundary: return SpinConfiguration::extend_boundary(spec.bc);
    }
    return SpinConfiguration(spec.bc);
}

ChainResult run_chain_multi(const ChainSpec& spec, const MultiObservable& obs) {
    if (spec.sweeps < 1 || spec.thin < 1) throw DomainError("sweeps and thin must be at least 1");
    if (spec.beta < 0) throw DomainError("beta must be nonnegative");
    ChainResult res;
    SpinConfiguration c = initial_configuration(spec);
    const CounterRng rng(spec.seed, spec.replica);
    std::uint64_t t = 0;
    for (long long s = 0; s < spec.burn_in; ++s) glauber_sweep(c, spec.beta, rng, t++);
    const std::size_t k_obs = obs.names.size();
    res.series.assign(k_obs, {});
    for (auto& v : res.series) v.reserve(static_cast<std::size_t>(spec.sweeps / spec.thin));
    std::vector<double> out(k_obs);
    for (long long s = 1; s <= spec.sweeps; ++s) {
        glauber_sweep(c, spec.beta, rng, t++);
        if (s % spec.thin) continue;
        obs.fn(c, out);
        for (std::size_t k = 0; k < k_obs; ++k) res.series[k].push_back(out[k]);
    }
    for (const auto& v : res.series) {
        res.stats.push_back(batch_means(v, 32, spec.thin));
        const std::size_t half = v.size() / 2;
        if (half >= 16) {
            const std::vector<double> a(v.begin(), v.begin() + half), b(v.begin() + half, v.end());
            const auto sa = batch_means(a, 16, spec.thin), sb = batch_means(b, 16, spec.thin);
            const double err = std::hypot(sa.std_error, sb.std_error);
            res.half_drift.push_back(err > 0 ? std::abs(sa.mean - sb.mean) / err : 0.0);
        } else {
            res.half_drift.push_back(0.0);
        }
    }
    res.final_state = std::move(c);
    return res;
}

ChainResult run_chain_full(const ChainSpec& spec, const std::vector<Observable>& obs) {
    MultiObservable m;
    for (const auto& o : obs) m.names.push_back(o.name);
    m.fn = [&obs](const SpinConfiguration& c, std::vector<double>& out) {
        for (std::size_t k = 0; k < obs.size(); ++k) out[k] = obs[k].fn(c);
    };
    return run_chain_multi(spec, m);
}

std::vector<SampleStats> run_chain(const ChainSpec& spec, const std::vector<Observable>& obs) {
    return run_chain_full(spec, obs).stats;
}

std::vector<SampleStats> parallel_chains(const ChainSpec& spec, int replicas, const std::vector<Observable>& obs) {
    if (replicas < 1) throw DomainError("replicas must be at least 1");
    std::vector<ChainResult> runs(replicas);
#pragma omp parallel for schedule(dynamic, 1)
    for (int r = 0; r < replicas; ++r) {
        ChainSpec s = spec;
        s.replica = static_cast<std::uint64_t>(r);
        runs[r] = run_chain_full(s, obs);
    }
    if (replicas == 1) return runs[0].stats;
    std::vector<SampleStats> pooled(obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k) {
        std::vector<double> batches;
        double mean = 0, tau = 0;
        long long samples = 0;
        for (const auto& run : runs) {
            const auto b = batch_averages(run.series[k], 32);
            batches.insert(batches.end(), b.begin(), b.end());
            mean += run.stats[k].mean;
            tau += run.stats[k].autocorr_estimate;
            samples += run.stats[k].samples;
        }
        mean /= replicas;
        double var = 0;
        for (double b : batches) var += (b - mean) * (b - mean);
        var /= static_cast<double>(batches.size() - 1);
        pooled[k].mean = mean;
        pooled[k].std_error = std::sqrt(var / static_cast<double>(batches.size()));
        pooled[k].n_batches = static_cast<int>(batches.size());
        pooled[k].autocorr_estimate = tau / replicas;
        pooled[k].samples = samples;
    }
    return pooled;
}

}  // namespace ising
