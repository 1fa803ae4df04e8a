#pragma once

#include <utility>
#include <vector>

#include "ising/boundary.hpp"
#include "ising/lattice.hpp"

namespace ising {

inline constexpr int kTransferWidthCap = 12;

// Column-to-column transfer matrix for a rectangle with a frozen boundary
// layer. The state is the column of height() spins (bit r set means spin -1
// at row y0 + r). Used both as an exact oracle and, with a larger width
// limit, by the surface-tension estimators.
class TransferMatrix {
public:
    TransferMatrix(const BoundaryCondition& bc, double beta, int width_cap = kTransferWidthCap);

    // log Z with the listed interior spins pinned (empty = plain Z).
    double log_partition(const std::vector<std::pair<Site, int>>& pins = {}) const;

private:
    BoundaryCondition bc_;
    double beta_;
};

// In-place application of prod_r exp(beta s_r s'_r) over the W rows of a
// column (horizontal bonds between adjacent columns).
void mix_columns(std::vector<double>& v, int width, double beta);

// Energy -sum s_r s_{r+1} of the vertical bonds inside a column, indexed by
// the column state.
std::vector<int> column_bond_energy(int width);

}  // namespace ising
