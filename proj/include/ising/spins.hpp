#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "ising/boundary.hpp"
#include "ising/lattice.hpp"

namespace ising {

// Interior spins of a rectangle plus its frozen boundary layer. Spins live
// in a padded (w+2)x(h+2) byte grid so that neighbour lookups need no
// bounds checks; the four padding corners hold 0.
class SpinConfiguration {
public:
    SpinConfiguration() = default;
    // All interior spins +1.
    explicit SpinConfiguration(const BoundaryCondition& bc);
    // Interior from a bit mask in canonical order, bit k set means spin -1.
    static SpinConfiguration from_bits(const BoundaryCondition& bc, std::uint64_t bits);
    // Each interior site copies the nearest boundary-layer spin.
    static SpinConfiguration extend_boundary(const BoundaryCondition& bc);

    const Rect& rect() const { return bc_->rect(); }
    const BoundaryCondition& bc() const { return *bc_; }

    int spin(Site s) const { return grid_[offset(s)]; }
    int spin(int x, int y) const { return grid_[offset(Site{x, y})]; }
    void set(Site s, int v);

    // Packed interior spins (bit k set means spin -1 at canonical index k).
    std::vector<std::uint64_t> packed() const;
    std::uint64_t bits() const;  // only for boxes of at most 64 sites

    // Direct access used by the sweep kernels.
    std::int8_t* data() { return grid_.data(); }
    const std::int8_t* data() const { return grid_.data(); }
    int stride() const { return rect().width() + 2; }
    std::size_t offset(Site s) const {
        return static_cast<std::size_t>(s.y - rect().y0 + 1) * stride() + (s.x - rect().x0 + 1);
    }

    bool operator==(const SpinConfiguration& o) const { return grid_ == o.grid_ && rect() == o.rect(); }

private:
    std::shared_ptr<const BoundaryCondition> bc_;
    std::vector<std::int8_t> grid_;
};

// H = - sum of s_i s_j over nearest-neighbour bonds meeting the box.
int hamiltonian(const SpinConfiguration& c);
// Number of unequal-spin bonds meeting the box.
int unequal_bonds(const SpinConfiguration& c);
// Number of bonds meeting the box.
int bond_count(const Rect& r);

// A function of finitely many spins, tabulated over the restricted
// configuration: table index bit j set means spin -1 at support[j].
struct LocalFunction {
    std::vector<Site> support;
    std::vector<double> table;

    static LocalFunction spin(Site s);
    static LocalFunction product(const std::vector<Site>& sites);
    static LocalFunction from(std::vector<Site> support, const std::function<double(const std::vector<int>&)>& f);
    // f(sigma) composed with the global spin flip.
    LocalFunction flipped() const;
    double operator()(const SpinConfiguration& c) const;
    double value_at(std::uint32_t restricted_index) const { return table[restricted_index]; }
    double sup_norm() const;
};

}  // namespace ising
