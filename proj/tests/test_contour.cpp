#include <doctest.h>

#include <deque>
#include <random>
#include <set>

#include "ising/contour.hpp"
#include "ising/json_io.hpp"

using namespace ising;

namespace {

// Independent circuit test: search for a closed path of good sites with
// odd winding around the core, on the two-sheeted cover cut along the ray
// {(x, 1/2) : x > 0}.
bool circuit_oracle(const SpinConfiguration& c, int core, int sign) {
    const Rect r = c.rect();
    auto good = [&](Site s) {
        return r.contains(s) && !(std::abs(s.x) <= core && std::abs(s.y) <= core) && c.spin(s) == sign;
    };
    auto crosses = [](Site a, Site b) {
        if (std::min(a.y, b.y) != 0 || std::max(a.y, b.y) != 1) return false;
        return a.x + b.x > 0;
    };
    for (const Site& start : rect_sites(r)) {
        if (!good(start)) continue;
        std::set<std::pair<Site, int>> seen{{start, 0}};
        std::deque<std::pair<Site, int>> q{{start, 0}};
        while (!q.empty()) {
            const auto [s, p] = q.front();
            q.pop_front();
            for (const Site& t : neighbors(s, Adjacency::SPath)) {
                if (!good(t)) continue;
                const int pt = p ^ (crosses(s, t) ? 1 : 0);
                if (t == start && pt == 1) return true;
                if (seen.insert({t, pt}).second) q.push_back({t, pt});
            }
        }
    }
    return false;
}

std::vector<BoundaryCondition> bcs(const Rect& r) {
    return {BoundaryCondition::plus(r), BoundaryCondition::dobrushin(r), BoundaryCondition::quadrant(r),
            BoundaryCondition::bernoulli(r, 0.5, 1), BoundaryCondition::bernoulli(r, 0.5, 2)};
}

}  // namespace

TEST_CASE("invariants on every configuration of the n=1 box") {
    const Rect r = BoxSpec{1}.rect();
    for (const auto& bc : bcs(r)) {
        for (std::uint64_t bits = 0; bits < 512; ++bits) {
            const auto c = SpinConfiguration::from_bits(bc, bits);
            const auto f = extract_contours(c);
            REQUIRE(check_reconstruction(c, f) == "");
            REQUIRE(check_endpoints(f, bc) == "");
            REQUIRE(check_matching(f) == "");
            REQUIRE(check_no_spath_crossing(c, f) == "");
            std::size_t len = 0;
            for (const auto& g : f.open_contours) len += g.length();
            for (const auto& g : f.closed_contours) len += g.length();
            CHECK(len == edge_set(c).edges.size());
            CHECK(static_cast<int>(len) == unequal_bonds(c));
        }
    }
}

TEST_CASE("invariants on random larger boxes") {
    std::mt19937_64 gen(17);
    const Rect r = BoxSpec{4}.rect();
    for (int k = 0; k < 200; ++k) {
        const auto bc = BoundaryCondition::bernoulli(r, 0.5, gen());
        SpinConfiguration c(bc);
        for (const auto& s : rect_sites(r)) c.set(s, (gen() & 1) ? 1 : -1);
        const auto f = extract_contours(c);
        REQUIRE(check_reconstruction(c, f) == "");
        REQUIRE(check_endpoints(f, bc) == "");
        REQUIRE(check_matching(f) == "");
        REQUIRE(check_no_spath_crossing(c, f) == "");
    }
}

TEST_CASE("checkerboard") {
    const Rect r = BoxSpec{2}.rect();
    const auto bc = BoundaryCondition::plus(r);
    SpinConfiguration c(bc);
    for (const auto& s : rect_sites(r)) c.set(s, ((s.x + s.y) & 1) ? -1 : 1);
    const auto f = extract_contours(c);
    CHECK(f.open_contours.empty());
    std::size_t len = 0;
    for (const auto& g : f.closed_contours) len += g.length();
    CHECK(len == 4 * 12);  // every bond around the 12 minus sites
    CHECK(check_reconstruction(c, f) == "");
    CHECK(check_no_spath_crossing(c, f) == "");
}

TEST_CASE("Dobrushin endpoints and the ground state") {
    for (int n : {1, 3, 6}) {
        const auto bc = BoundaryCondition::dobrushin(BoxSpec{n}.rect());
        CHECK(endpoints_of_bc(bc).points.size() == 2);
        CHECK(bc.sign_changes().size() == 2);
        const auto f = extract_contours(SpinConfiguration::extend_boundary(bc));
        REQUIRE(f.open_contours.size() == 1);
        CHECK(f.closed_contours.empty());
        CHECK(f.open_contours[0].length() == static_cast<std::size_t>(2 * n + 1));
        CHECK(meets_dual_box(f.open_contours[0], 0));
        const auto prof = interface_height_profile(f);
        CHECK(prof.size() == static_cast<std::size_t>(2 * n + 1));
    }
    CHECK(endpoints_of_bc(BoundaryCondition::plus(BoxSpec{2}.rect())).points.empty());
    CHECK(endpoints_of_bc(BoundaryCondition::quadrant(BoxSpec{2}.rect())).points.size() == 4);
}

TEST_CASE("circuit event matches the double-cover oracle") {
    std::mt19937_64 gen(99);
    const Rect r = BoxSpec{3}.rect();
    int found[2] = {0, 0};
    for (int k = 0; k < 10000; ++k) {
        const auto bc = BoundaryCondition::bernoulli(r, 0.5, gen());
        SpinConfiguration c(bc);
        const double p = 0.5 + 0.4 * ((k % 5) / 4.0);  // bias towards plus
        std::bernoulli_distribution plus(p);
        for (const auto& s : rect_sites(r)) c.set(s, plus(gen) ? 1 : -1);
        for (int sign : {1, -1}) {
            const bool a = circuit_event(c, BoxSpec{1}, sign);
            REQUIRE(a == circuit_oracle(c, 1, sign));
            found[a ? 1 : 0]++;
        }
    }
    CHECK(found[0] > 100);
    CHECK(found[1] > 100);
}

TEST_CASE("circuits need the NW-SE diagonal, not the NE-SW one") {
    const Rect r = BoxSpec{2}.rect();
    const auto bc = BoundaryCondition::minus(r);
    auto c = SpinConfiguration::extend_boundary(bc);
    // Diamond around the origin: closed only with both diagonals.
    for (Site s : {Site{1, 0}, Site{0, 1}, Site{-1, 0}, Site{0, -1}}) c.set(s, 1);
    CHECK_FALSE(circuit_event(c, BoxSpec{0}, 1));
    CHECK_FALSE(circuit_oracle(c, 0, 1));
    // Hexagon of the triangular lattice.
    for (Site s : {Site{1, -1}, Site{-1, 1}}) c.set(s, 1);
    CHECK(circuit_event(c, BoxSpec{0}, 1));
    CHECK(circuit_oracle(c, 0, 1));
}

TEST_CASE("chords") {
    CHECK(chords_cross({0, 2}, {1, 3}));
    CHECK_FALSE(chords_cross({0, 3}, {1, 2}));
    CHECK_FALSE(chords_cross({0, 1}, {2, 3}));
}

TEST_CASE("family JSON round trip") {
    const auto bc = BoundaryCondition::quadrant(BoxSpec{3}.rect());
    std::mt19937_64 gen(4);
    SpinConfiguration c(bc);
    for (const auto& s : rect_sites(bc.rect())) c.set(s, (gen() % 3) ? bc.at(Site{s.x, s.y > 0 ? 4 : -4}) : -1);
    const auto f = extract_contours(c);
    const auto g = family_from_json(family_to_json(f));
    CHECK(family_key(f) == family_key(g));
    CHECK(g.matching == f.matching);
    CHECK(g.closed_contours.size() == f.closed_contours.size());
}

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 2, 3}) == 2.5);
}
