#include "ising/boundary.hpp"

#include <cmath>
#include <cstdio>

#include "ising/errors.hpp"
#include "ising/rng.hpp"

namespace ising {

BoundaryCondition::BoundaryCondition(Rect r, std::vector<int> values, BcLabel label)
    : rect_(r), values_(std::move(values)), label_(label) {
    if (values_.size() != boundary_layer(r).size()) throw DomainError("boundary condition does not cover the boundary layer");
    for (int v : values_)
        if (v != 1 && v != -1) throw DomainError("boundary spins must be +1 or -1");
}

namespace {

template <class F>
std::vector<int> fill(const Rect& r, F&& f) {
    std::vector<int> v;
    for (const Site& s : boundary_layer(r)) v.push_back(f(s) ? 1 : -1);
    return v;
}

}  // namespace

BoundaryCondition BoundaryCondition::plus(const Rect& r) {
    return {r, fill(r, [](Site) { return true; }), BcLabel::Plus};
}

BoundaryCondition BoundaryCondition::minus(const Rect& r) {
    return {r, fill(r, [](Site) { return false; }), BcLabel::Minus};
}

BoundaryCondition BoundaryCondition::dobrushin(const Rect& r) {
    return {r, fill(r, [](Site s) { return s.y > 0; }), BcLabel::Dobrushin};
}

BoundaryCondition BoundaryCondition::quadrant(const Rect& r) {
    return {r, fill(r, [](Site s) { return (s.x >= 0) != (s.y >= 0); }), BcLabel::Quadrant};
}

BoundaryCondition BoundaryCondition::bernoulli(const Rect& r, double p, std::uint64_t seed) {
    const CounterRng rng(seed, 0);
    std::vector<int> v;
    const auto layer = boundary_layer(r);
    for (std::size_t k = 0; k < layer.size(); ++k) v.push_back(rng.uniform(k) < p ? 1 : -1);
    BoundaryCondition bc(r, std::move(v), BcLabel::Bernoulli);
    bc.p_ = p;
    bc.seed_ = seed;
    return bc;
}

BoundaryCondition BoundaryCondition::tilted(const Rect& r, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    // Tolerance keeps lattice points on the dividing line on the + side.
    BoundaryCondition bc(r, fill(r, [&](Site q) { return q.x * c + q.y * s >= -1e-12; }), BcLabel::Tilted);
    bc.theta_ = theta;
    return bc;
}

BoundaryCondition BoundaryCondition::from_endpoints(const Rect& r, const std::vector<int>& ring_positions) {
    const int len = static_cast<int>(boundary_layer(r).size());
    std::vector<char> change(len, 0);
    for (int k : ring_positions) {
        if (k < 0 || k >= len) throw DomainError("ring position out of range");
        change[k] ^= 1;
    }
    int parity = 0;
    for (char c : change) parity ^= c;
    if (parity) throw OddSiteCount("endpoint set must have even cardinality");
    std::vector<int> v(len);
    int s = 1;
    for (int k = 0; k < len; ++k) {
        v[k] = s;
        if (change[k]) s = -s;
    }
    return {r, std::move(v), BcLabel::Explicit};
}

BoundaryCondition BoundaryCondition::explicit_values(const Rect& r, std::vector<int> values) {
    return {r, std::move(values), BcLabel::Explicit};
}

int BoundaryCondition::at(Site s) const {
    const int k = boundary_layer_index(rect_, s);
    if (k < 0) throw DomainError("site is not on the boundary layer");
    return values_[k];
}

BoundaryCondition BoundaryCondition::flipped() const {
    BoundaryCondition out = *this;
    for (int& v : out.values_) v = -v;
    if (label_ == BcLabel::Plus) out.label_ = BcLabel::Minus;
    else if (label_ == BcLabel::Minus) out.label_ = BcLabel::Plus;
    else out.label_ = BcLabel::Explicit;
    return out;
}

std::vector<int> BoundaryCondition::sign_changes() const {
    std::vector<int> out;
    const int len = static_cast<int>(values_.size());
    for (int k = 0; k < len; ++k)
        if (values_[k] != values_[(k + 1) % len]) out.push_back(k);
    return out;
}

bool BoundaryCondition::leq(const BoundaryCondition& other) const {
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (values_[k] > other.values_[k]) return false;
    return true;
}

std::string BoundaryCondition::name() const {
    char buf[64];
    switch (label_) {
        case BcLabel::Plus: return "plus";
        case BcLabel::Minus: return "minus";
        case BcLabel::Dobrushin: return "dobrushin";
        case BcLabel::Quadrant: return "quadrant";
        case BcLabel::Bernoulli:
            std::snprintf(buf, sizeof buf, "bernoulli:%g:%llu", p_, static_cast<unsigned long long>(seed_));
            return buf;
        case BcLabel::Tilted:
            std::snprintf(buf, sizeof buf, "tilted:%.6f", theta_);
            return buf;
        case BcLabel::Explicit: return "explicit";
    }
    return "explicit";
}

}  // namespace ising
