#include "ising/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ising/errors.hpp"
#include "ising/sampler.hpp"

namespace ising {

MeasureOracle make_oracle(const BoundaryCondition& bc, double beta) {
    return MeasureOracle{bc, beta, bc.rect().size() <= kEnumerationCap ? Engine::Enumeration : Engine::TransferMatrix};
}

namespace {

void check_support(const Rect& r, const LocalFunction& f) {
    for (const Site& s : f.support)
        if (!r.contains(s)) throw SupportOutOfBox("local function support leaves the box");
}

std::vector<std::pair<Site, int>> pins_for(const LocalFunction& f, std::uint32_t idx) {
    std::vector<std::pair<Site, int>> pins;
    for (std::size_t j = 0; j < f.support.size(); ++j) pins.push_back({f.support[j], ((idx >> j) & 1u) ? -1 : 1});
    return pins;
}

}  // namespace

double log_partition_function(const MeasureOracle& o) {
    if (o.beta < 0) throw DomainError("beta must be nonnegative");
    if (o.engine == Engine::Enumeration) return enumerate_histogram(SpinSystem::box(o.bc)).log_partition(o.beta);
    return TransferMatrix(o.bc, o.beta).log_partition();
}

double partition_function(const MeasureOracle& o) { return std::exp(log_partition_function(o)); }

double expectation(const MeasureOracle& o, const LocalFunction& f) {
    check_support(o.rect(), f);
    if (o.engine == Engine::Enumeration) {
        const SpinSystem sys = SpinSystem::box(o.bc);
        EnumerationOptions opt;
        for (const Site& s : f.support) opt.support.push_back(o.rect().index(s));
        return enumerate_histogram(sys, opt).expectation(o.beta, f.table);
    }
    return expectation_transfer(o.bc, o.beta, f, kTransferWidthCap);
}

double expectation_transfer(const BoundaryCondition& bc, double beta, const LocalFunction& f, int width_cap) {
    check_support(bc.rect(), f);
    const TransferMatrix tm(bc, beta, width_cap);
    const double lz = tm.log_partition();
    double acc = 0.0;
    for (std::uint32_t idx = 0; idx < f.table.size(); ++idx) {
        if (f.table[idx] == 0.0) continue;
        acc += f.table[idx] * std::exp(tm.log_partition(pins_for(f, idx)) - lz);
    }
    return acc;
}

double dlr_check(const MeasureOracle& outer, const Rect& inner, const LocalFunction& f) {
    const Rect& R = outer.rect();
    if (!(inner.x0 > R.x0 && inner.x1 < R.x1 && inner.y0 > R.y0 && inner.y1 < R.y1))
        throw DomainError("inner box must lie strictly inside the outer box");
    check_support(inner, f);

    std::vector<Site> ring;
    for (const Site& s : rect_sites(R))
        if (!inner.contains(s)) ring.push_back(s);
    const SpinSystem ring_sys = SpinSystem::build(ring, [&](Site s) {
        return inner.contains(s) ? 0 : outer.bc.at(s);
    });
    // Class = ring spins on the inner box's boundary layer.
    const auto inner_layer = boundary_layer(inner);
    EnumerationOptions opt;
    for (const Site& s : inner_layer) opt.support.push_back(ring_sys.index_of(s));
    const EnergyHistogram hist = enumerate_histogram(ring_sys, opt);

    const double beta = outer.beta;
    std::vector<double> log_z(hist.classes), inner_f(hist.classes);
    for (int c = 0; c < hist.classes; ++c) {
        std::vector<int> values(inner_layer.size());
        for (std::size_t j = 0; j < inner_layer.size(); ++j) values[j] = ((c >> j) & 1) ? -1 : 1;
        const MeasureOracle in{BoundaryCondition::explicit_values(inner, values), beta, Engine::Enumeration};
        log_z[c] = log_partition_function(in);
        inner_f[c] = expectation(in, f);
    }
    // Weighted re-average sum_eta w(eta) Z^eta <f>^eta / sum_eta w(eta) Z^eta.
    double shift = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < hist.classes; ++c)
        for (int e = -hist.emax; e <= hist.emax; ++e)
            if (hist.at(c, e)) shift = std::max(shift, -beta * e + log_z[c]);
    double num = 0, den = 0;
    for (int c = 0; c < hist.classes; ++c) {
        double sc = 0;
        for (int e = -hist.emax; e <= hist.emax; ++e)
            if (const auto k = hist.at(c, e)) sc += static_cast<double>(k) * std::exp(-beta * e + log_z[c] - shift);
        num += sc * inner_f[c];
        den += sc;
    }
    const double direct = expectation(outer, f);
    return std::abs(num / den - direct);
}

double strip_partition(int width, int length, double beta, const BoundaryCondition& bc) {
    if (width > kTransferWidthCap) throw WidthExceeded("strip width exceeds 12");
    if (bc.rect().height() != width || bc.rect().width() != length)
        throw DomainError("boundary condition does not match the strip dimensions");
    return TransferMatrix(bc, beta).log_partition();
}

ReferenceValue pure_phase_reference(double beta, const LocalFunction& f, int n_max, double tol) {
    int n0 = 0;
    for (const Site& s : f.support) n0 = std::max({n0, std::abs(s.x), std::abs(s.y)});
    const int exact_max = (kTransferWidthCap - 1) / 2;
    double prev = 0.0, prev_inc = std::numeric_limits<double>::infinity();
    bool have_prev = false;
    for (int n = n0; n <= std::min(n_max, exact_max); ++n) {
        const BoxSpec box{n};
        const double v = expectation(make_oracle(BoundaryCondition::plus(box.rect()), beta), f);
        if (have_prev) {
            const double inc = std::abs(v - prev);
            if (inc < tol) return {v, inc, n};
            if (inc > prev_inc && n > n0 + 2) throw NotConverged("increments of <f>^+_n do not shrink");
            prev_inc = inc;
        }
        prev = v;
        have_prev = true;
    }
    if (n_max <= exact_max) {
        if (prev_inc < 1e-6) return {prev, prev_inc, std::min(n_max, exact_max)};
        throw NotConverged("exact sizes exhausted before reaching tolerance");
    }
    // Sampled fallback on the plus box of size n_max.
    ChainSpec spec;
    spec.bc = BoundaryCondition::plus(BoxSpec{n_max}.rect());
    spec.beta = beta;
    spec.seed = 0x5eedu;
    spec.burn_in = 200;
    spec.sweeps = 20000;
    spec.thin = 1;
    const auto stats = run_chain(spec, {Observable::local(f)});
    return {stats[0].mean, stats[0].std_error, n_max};
}

double self_dual_beta() { return 0.5 * std::log1p(std::sqrt(2.0)); }

}  // namespace ising
