#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ising/lattice.hpp"

namespace ising {

enum class BcLabel { Plus, Minus, Dobrushin, Quadrant, Bernoulli, Tilted, Explicit };

// Frozen exterior spins on the boundary layer of a rectangle. Values are
// stored in boundary_layer() order.
class BoundaryCondition {
public:
    BoundaryCondition() = default;
    BoundaryCondition(Rect r, std::vector<int> values, BcLabel label);

    static BoundaryCondition plus(const Rect& r);
    static BoundaryCondition minus(const Rect& r);
    // +1 iff y > 0.
    static BoundaryCondition dobrushin(const Rect& r);
    // +1 iff (x >= 0) xor (y >= 0): four sign changes on a centred box.
    static BoundaryCondition quadrant(const Rect& r);
    static BoundaryCondition bernoulli(const Rect& r, double p, std::uint64_t seed);
    // +1 iff x cos(theta) + y sin(theta) >= 0.
    static BoundaryCondition tilted(const Rect& r, double theta);
    // Sign changes exactly at the given ring positions (see ring_vertex); the
    // first layer site is +1.
    static BoundaryCondition from_endpoints(const Rect& r, const std::vector<int>& ring_positions);
    static BoundaryCondition explicit_values(const Rect& r, std::vector<int> values);

    const Rect& rect() const { return rect_; }
    BcLabel label() const { return label_; }
    const std::vector<int>& values() const { return values_; }
    // Spin of a boundary-layer site; throws for other sites.
    int at(Site s) const;
    BoundaryCondition flipped() const;
    // Ring positions k where values[k] != values[k+1].
    std::vector<int> sign_changes() const;
    // Sitewise comparison, both conditions on the same rectangle.
    bool leq(const BoundaryCondition& other) const;

    std::string name() const;
    double bernoulli_p() const { return p_; }
    std::uint64_t bernoulli_seed() const { return seed_; }

private:
    Rect rect_{};
    std::vector<int> values_;
    BcLabel label_ = BcLabel::Explicit;
    double p_ = 0.0;
    std::uint64_t seed_ = 0;
    double theta_ = 0.0;
};

}  // namespace ising
