#include "ising/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

#include "ising/errors.hpp"

namespace ising {

int SpinSystem::max_abs_energy() const {
    int e = bonds;
    for (int h : field) e += std::abs(h);
    return e;
}

int SpinSystem::energy(std::uint32_t bits) const {
    int e = 0;
    for (int i = 0; i < size(); ++i) {
        const int si = ((bits >> i) & 1u) ? -1 : 1;
        e -= field[i] * si;
        for (int j : nbr[i])
            if (j > i) e -= si * (((bits >> j) & 1u) ? -1 : 1);
    }
    return e;
}

int SpinSystem::index_of(Site s) const {
    for (int i = 0; i < size(); ++i)
        if (sites[i] == s) return i;
    return -1;
}

SpinSystem SpinSystem::build(const std::vector<Site>& free_sites, const std::function<int(Site)>& frozen) {
    SpinSystem sys;
    sys.sites = free_sites;
    std::map<Site, int> index;
    for (int i = 0; i < static_cast<int>(free_sites.size()); ++i) index[free_sites[i]] = i;
    sys.nbr.resize(free_sites.size());
    sys.field.assign(free_sites.size(), 0);
    for (int i = 0; i < static_cast<int>(free_sites.size()); ++i) {
        for (const Site& t : neighbors(free_sites[i], Adjacency::NearestNeighbor)) {
            auto it = index.find(t);
            if (it != index.end()) {
                sys.nbr[i].push_back(it->second);
                if (it->second > i) ++sys.bonds;
            } else {
                sys.field[i] += frozen(t);
            }
        }
    }
    return sys;
}

SpinSystem SpinSystem::box(const BoundaryCondition& bc) {
    return build(rect_sites(bc.rect()), [&](Site s) { return bc.at(s); });
}

std::uint64_t EnergyHistogram::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

int EnergyHistogram::min_energy() const {
    for (int e = -emax; e <= emax; ++e)
        for (int c = 0; c < classes; ++c)
            if (at(c, e)) return e;
    return 0;
}

double EnergyHistogram::log_sum(double beta, const std::vector<double>& w) const {
    // Shift by the largest exponent present so every term is at most 1.
    double shift = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c)
        for (int e = -emax; e <= emax; ++e)
            if (at(c, e) && (w.empty() || w[c] != 0.0)) shift = std::max(shift, -beta * e);
    if (!std::isfinite(shift)) return -std::numeric_limits<double>::infinity();
    double s = 0;
    for (int c = 0; c < classes; ++c) {
        const double wc = w.empty() ? 1.0 : w[c];
        if (wc == 0.0) continue;
        double sc = 0;
        for (int e = -emax; e <= emax; ++e) {
            const auto k = at(c, e);
            if (k) sc += static_cast<double>(k) * std::exp(-beta * e - shift);
        }
        s += wc * sc;
    }
    return std::log(s) + shift;
}

double EnergyHistogram::log_class_partition(double beta, int cls) const {
    std::vector<double> w(classes, 0.0);
    w[cls] = 1.0;
    return log_sum(beta, w);
}

double EnergyHistogram::expectation(double beta, const std::vector<double>& value) const {
    const int emin = min_energy();
    double num = 0, den = 0;
    for (int c = 0; c < classes; ++c) {
        double sc = 0;
        for (int e = emin; e <= emax; ++e) {
            const auto k = at(c, e);
            if (k) sc += static_cast<double>(k) * std::exp(-beta * (e - emin));
        }
        num += value[c] * sc;
        den += sc;
    }
    return num / den;
}

namespace {

void check_capacity(const SpinSystem& sys, const EnumerationOptions& opt) {
    if (sys.size() > kEnumerationCap)
        throw CapacityExceeded("enumeration needs at most 24 free spins, got " + std::to_string(sys.size()));
    if (opt.mode == EnergyHistogram::Mode::Restricted && opt.support.size() > 16)
        throw CapacityExceeded("restricted support too large");
    for (int s : opt.support)
        if (s < 0 || s >= sys.size()) throw SupportOutOfBox("support site is not a free spin");
}

EnergyHistogram empty_histogram(const SpinSystem& sys, const EnumerationOptions& opt) {
    EnergyHistogram h;
    h.emax = sys.max_abs_energy();
    h.classes = opt.mode == EnergyHistogram::Mode::Parity ? 2 : (1 << opt.support.size());
    h.counts.assign(static_cast<std::size_t>(h.classes) * h.levels(), 0);
    return h;
}

std::uint32_t class_of(std::uint32_t bits, const EnumerationOptions& opt) {
    std::uint32_t c = 0;
    if (opt.mode == EnergyHistogram::Mode::Parity) {
        for (int s : opt.support) c ^= (bits >> s) & 1u;
    } else {
        for (std::size_t j = 0; j < opt.support.size(); ++j) c |= ((bits >> opt.support[j]) & 1u) << j;
    }
    return c;
}

}  // namespace

EnergyHistogram enumerate_histogram_reference(const SpinSystem& sys, const EnumerationOptions& opt) {
    check_capacity(sys, opt);
    EnergyHistogram h = empty_histogram(sys, opt);
    const std::uint64_t total = std::uint64_t{1} << sys.size();
    const int levels = h.levels();
    for (std::uint64_t b = 0; b < total; ++b) {
        const auto bits = static_cast<std::uint32_t>(b);
        ++h.counts[static_cast<std::size_t>(class_of(bits, opt)) * levels + sys.energy(bits) + h.emax];
    }
    return h;
}

EnergyHistogram enumerate_histogram(const SpinSystem& sys, const EnumerationOptions& opt) {
    check_capacity(sys, opt);
    EnergyHistogram h = empty_histogram(sys, opt);
    const int n = sys.size();
    const std::uint64_t total = std::uint64_t{1} << n;
    const int chunk_bits = n > 12 ? std::min(8, n - 12) : 0;
    const int chunks = 1 << chunk_bits;
    const std::uint64_t per_chunk = total >> chunk_bits;
    const int levels = h.levels();

    // Flattened adjacency for the inner loop.
    std::vector<int> toggle(n, 0);  // class bit toggled by flipping site i
    for (std::size_t j = 0; j < opt.support.size(); ++j) {
        const int s = opt.support[j];
        toggle[s] ^= opt.mode == EnergyHistogram::Mode::Parity ? 1 : (1 << j);
    }

    std::vector<std::vector<std::uint64_t>> partial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < chunks; ++c) {
        std::vector<std::uint64_t> local(h.counts.size(), 0);
        const std::uint64_t start = static_cast<std::uint64_t>(c) * per_chunk;
        auto gray = static_cast<std::uint32_t>(start ^ (start >> 1));
        int spin[kEnumerationCap];
        for (int i = 0; i < n; ++i) spin[i] = ((gray >> i) & 1u) ? -1 : 1;
        int e = sys.energy(gray);
        std::uint32_t cls = class_of(gray, opt);
        ++local[static_cast<std::size_t>(cls) * levels + e + h.emax];
        for (std::uint64_t t = start + 1; t < start + per_chunk; ++t) {
            const int k = __builtin_ctzll(t);
            int loc = sys.field[k];
            for (int j : sys.nbr[k]) loc += spin[j];
            e += 2 * spin[k] * loc;
            spin[k] = -spin[k];
            cls ^= toggle[k];
            ++local[static_cast<std::size_t>(cls) * levels + e + h.emax];
        }
        partial[c] = std::move(local);
    }
    for (const auto& p : partial)
        for (std::size_t i = 0; i < p.size(); ++i) h.counts[i] += p[i];
    return h;
}

}  // namespace ising
