#include "ising/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "ising/errors.hpp"

namespace ising {

void mix_columns(std::vector<double>& v, int width, double beta) {
    const double ep = std::exp(beta), em = std::exp(-beta);
    const std::size_t n = v.size();
    for (int r = 0; r < width; ++r) {
        const std::size_t bit = std::size_t{1} << r;
#pragma omp parallel for schedule(static) if (n >= (std::size_t{1} << 16))
        for (std::size_t s = 0; s < n; ++s) {
            if (s & bit) continue;
            const double a = v[s], b = v[s | bit];
            v[s] = ep * a + em * b;
            v[s | bit] = em * a + ep * b;
        }
    }
}

std::vector<int> column_bond_energy(int width) {
    std::vector<int> e(std::size_t{1} << width, 0);
    for (std::size_t s = 0; s < e.size(); ++s) {
        int v = 0;
        for (int r = 0; r + 1 < width; ++r) {
            const int a = ((s >> r) & 1) ? -1 : 1;
            const int b = ((s >> (r + 1)) & 1) ? -1 : 1;
            v -= a * b;
        }
        e[s] = v;
    }
    return e;
}

TransferMatrix::TransferMatrix(const BoundaryCondition& bc, double beta, int width_cap) : bc_(bc), beta_(beta) {
    if (bc.rect().height() > width_cap)
        throw WidthExceeded("transfer matrix height " + std::to_string(bc.rect().height()) + " exceeds cap " +
                            std::to_string(width_cap));
}

double TransferMatrix::log_partition(const std::vector<std::pair<Site, int>>& pins) const {
    const Rect& r = bc_.rect();
    const int W = r.height();
    const std::size_t states = std::size_t{1} << W;
    const auto bonds = column_bond_energy(W);
    auto spin = [](std::size_t s, int row) { return ((s >> row) & 1) ? -1 : 1; };

    for (const auto& [site, v] : pins)
        if (!r.contains(site)) throw SupportOutOfBox("pinned site outside the box");

    // Diagonal factor of column x: vertical bonds, top/bottom boundary bonds,
    // and left/right boundary bonds for the first/last column.
    auto column_weight = [&](int x, std::vector<double>& v) {
        const int bot = bc_.at({x, r.y0 - 1});
        const int top = bc_.at({x, r.y1 + 1});
        std::vector<int> side(W, 0);
        if (x == r.x0)
            for (int k = 0; k < W; ++k) side[k] += bc_.at({r.x0 - 1, r.y0 + k});
        if (x == r.x1)
            for (int k = 0; k < W; ++k) side[k] += bc_.at({r.x1 + 1, r.y0 + k});
        std::size_t pin_mask = 0, pin_val = 0;
        for (const auto& [site, val] : pins) {
            if (site.x != x) continue;
            const std::size_t bit = std::size_t{1} << (site.y - r.y0);
            pin_mask |= bit;
            if (val < 0) pin_val |= bit;
        }
        for (std::size_t s = 0; s < states; ++s) {
            if ((s & pin_mask) != pin_val) {
                v[s] = 0.0;
                continue;
            }
            int e = bonds[s] - bot * spin(s, 0) - top * spin(s, W - 1);
            for (int k = 0; k < W; ++k) e -= side[k] * spin(s, k);
            v[s] *= std::exp(-beta_ * e);
        }
    };

    std::vector<double> v(states, 1.0);
    double log_scale = 0.0;
    for (int x = r.x0; x <= r.x1; ++x) {
        if (x > r.x0) mix_columns(v, W, beta_);
        column_weight(x, v);
        const double m = *std::max_element(v.begin(), v.end());
        if (m <= 0.0) return -INFINITY;
        for (double& a : v) a /= m;
        log_scale += std::log(m);
    }
    double z = 0.0;
    for (double a : v) z += a;
    return log_scale + std::log(z);
}

}  // namespace ising
