#include "ising/spins.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "ising/errors.hpp"

namespace ising {

SpinConfiguration::SpinConfiguration(const BoundaryCondition& bc)
    : bc_(std::make_shared<const BoundaryCondition>(bc)) {
    const Rect& r = bc.rect();
    grid_.assign(static_cast<std::size_t>(r.width() + 2) * (r.height() + 2), 0);
    const auto layer = boundary_layer(r);
    for (std::size_t k = 0; k < layer.size(); ++k) grid_[offset(layer[k])] = static_cast<std::int8_t>(bc.values()[k]);
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0; x <= r.x1; ++x) grid_[offset({x, y})] = 1;
}

SpinConfiguration SpinConfiguration::from_bits(const BoundaryCondition& bc, std::uint64_t bits) {
    SpinConfiguration c(bc);
    const Rect& r = bc.rect();
    if (r.size() > 64) throw CapacityExceeded("from_bits needs at most 64 sites");
    for (int k = 0; k < r.size(); ++k)
        if ((bits >> k) & 1u) c.grid_[c.offset(r.site(k))] = -1;
    return c;
}

SpinConfiguration SpinConfiguration::extend_boundary(const BoundaryCondition& bc) {
    SpinConfiguration c(bc);
    const Rect& r = bc.rect();
    const auto layer = boundary_layer(r);
    for (int y = r.y0; y <= r.y1; ++y) {
        for (int x = r.x0; x <= r.x1; ++x) {
            int best = std::numeric_limits<int>::max();
            int v = 1;
            for (std::size_t k = 0; k < layer.size(); ++k) {
                const int d = std::abs(layer[k].x - x) + std::abs(layer[k].y - y);
                if (d < best) {
                    best = d;
                    v = bc.values()[k];
                }
            }
            c.grid_[c.offset({x, y})] = static_cast<std::int8_t>(v);
        }
    }
    return c;
}

void SpinConfiguration::set(Site s, int v) {
    if (!rect().contains(s)) throw SupportOutOfBox("cannot set a spin outside the box");
    grid_[offset(s)] = static_cast<std::int8_t>(v > 0 ? 1 : -1);
}

std::vector<std::uint64_t> SpinConfiguration::packed() const {
    const Rect& r = rect();
    std::vector<std::uint64_t> out((r.size() + 63) / 64, 0);
    for (int k = 0; k < r.size(); ++k)
        if (spin(r.site(k)) < 0) out[k / 64] |= std::uint64_t{1} << (k % 64);
    return out;
}

std::uint64_t SpinConfiguration::bits() const {
    if (rect().size() > 64) throw CapacityExceeded("bits() needs at most 64 sites");
    return packed()[0];
}

int hamiltonian(const SpinConfiguration& c) {
    const Rect& r = c.rect();
    int h = 0;
    // Horizontal bonds (x,y)-(x+1,y) with y inside and x from x0-1 to x1.
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0 - 1; x <= r.x1; ++x) h -= c.spin(x, y) * c.spin(x + 1, y);
    for (int x = r.x0; x <= r.x1; ++x)
        for (int y = r.y0 - 1; y <= r.y1; ++y) h -= c.spin(x, y) * c.spin(x, y + 1);
    return h;
}

int bond_count(const Rect& r) { return r.height() * (r.width() + 1) + r.width() * (r.height() + 1); }

int unequal_bonds(const SpinConfiguration& c) { return (hamiltonian(c) + bond_count(c.rect())) / 2; }

LocalFunction LocalFunction::spin(Site s) { return LocalFunction{{s}, {1.0, -1.0}}; }

LocalFunction LocalFunction::product(const std::vector<Site>& sites) {
    LocalFunction f;
    f.support = sites;
    f.table.resize(std::size_t{1} << sites.size());
    for (std::size_t i = 0; i < f.table.size(); ++i) f.table[i] = (__builtin_popcountll(i) & 1) ? -1.0 : 1.0;
    return f;
}

LocalFunction LocalFunction::from(std::vector<Site> support, const std::function<double(const std::vector<int>&)>& fn) {
    LocalFunction f;
    f.support = std::move(support);
    const std::size_t m = f.support.size();
    f.table.resize(std::size_t{1} << m);
    std::vector<int> s(m);
    for (std::size_t i = 0; i < f.table.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) s[j] = ((i >> j) & 1) ? -1 : 1;
        f.table[i] = fn(s);
    }
    return f;
}

LocalFunction LocalFunction::flipped() const {
    LocalFunction g = *this;
    const std::size_t mask = table.size() - 1;
    for (std::size_t i = 0; i < table.size(); ++i) g.table[i] = table[i ^ mask];
    return g;
}

double LocalFunction::operator()(const SpinConfiguration& c) const {
    std::uint32_t idx = 0;
    for (std::size_t j = 0; j < support.size(); ++j)
        if (c.spin(support[j]) < 0) idx |= 1u << j;
    return table[idx];
}

double LocalFunction::sup_norm() const {
    double m = 0;
    for (double v : table) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace ising
