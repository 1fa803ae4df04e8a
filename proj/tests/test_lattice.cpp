#include <doctest.h>

#include <algorithm>
#include <set>

#include "ising/lattice.hpp"

using namespace ising;

TEST_CASE("box_sites is row-major over the box") {
    CHECK(box_sites(BoxSpec{0}) == std::vector<Site>{{0, 0}});
    const auto b1 = box_sites(BoxSpec{1});
    REQUIRE(b1.size() == 9);
    CHECK(b1.front() == Site{-1, -1});
    CHECK(b1[1] == Site{0, -1});
    CHECK(b1.back() == Site{1, 1});
    CHECK(box_sites(BoxSpec{2}).size() == 25);
    const Rect r = BoxSpec{3}.rect();
    for (const Site& s : box_sites(BoxSpec{3})) CHECK(r.site(r.index(s)) == s);
    CHECK(r.index({4, 0}) == -1);
}

TEST_CASE("dual_box has (2n+2)^2 half-integer sites") {
    const auto d0 = dual_box(BoxSpec{0});
    REQUIRE(d0.size() == 4);
    for (const auto& d : d0) CHECK((std::abs(d.x2) == 1 && std::abs(d.y2) == 1));
    CHECK(dual_box(BoxSpec{1}).size() == 16);
    CHECK(dual_box(BoxSpec{2}).size() == 36);
    for (int n = 0; n <= 64; ++n) {
        const auto d = dual_box(BoxSpec{n});
        CHECK(d.size() == static_cast<std::size_t>((2 * n + 2) * (2 * n + 2)));
        for (const auto& s : d) REQUIRE(((s.x2 & 1) && (s.y2 & 1)));
    }
}

TEST_CASE("boundary_layer has 4(2n+1) sites at distance one") {
    CHECK(boundary_layer(BoxSpec{0}).size() == 4);
    CHECK(boundary_layer(BoxSpec{1}).size() == 12);
    CHECK(boundary_layer(BoxSpec{16}).size() == 132);
    const Rect r = BoxSpec{2}.rect();
    const auto layer = boundary_layer(BoxSpec{2});
    std::set<Site> seen(layer.begin(), layer.end());
    CHECK(seen.size() == layer.size());
    for (std::size_t k = 0; k < layer.size(); ++k) {
        const Site s = layer[k];
        CHECK_FALSE(r.contains(s));
        int inside = 0;
        for (const Site& t : neighbors(s, Adjacency::NearestNeighbor)) inside += r.contains(t);
        CHECK(inside == 1);
        CHECK(boundary_layer_index(r, s) == static_cast<int>(k));
    }
}

TEST_CASE("neighbors for the three adjacencies") {
    auto sorted = [](std::vector<Site> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(sorted(neighbors({0, 0}, Adjacency::NearestNeighbor)) ==
          sorted({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    const auto sp = neighbors({0, 0}, Adjacency::SPath);
    CHECK(sp.size() == 6);
    CHECK(std::count(sp.begin(), sp.end(), Site{-1, 1}) == 1);
    CHECK(std::count(sp.begin(), sp.end(), Site{1, -1}) == 1);
    const auto co = neighbors({0, 0}, Adjacency::CoSPath);
    CHECK(co.size() == 6);
    CHECK(std::count(co.begin(), co.end(), Site{1, 1}) == 1);
    CHECK(std::count(co.begin(), co.end(), Site{-1, -1}) == 1);
}

TEST_CASE("adjacencies are symmetric") {
    for (auto adj : {Adjacency::NearestNeighbor, Adjacency::SPath, Adjacency::CoSPath})
        for (const Site& s : box_sites(BoxSpec{2}))
            for (const Site& t : neighbors(s, adj)) {
                const auto back = neighbors(t, adj);
                CHECK(std::count(back.begin(), back.end(), s) == 1);
                CHECK(adjacent(s, t, adj));
            }
}

TEST_CASE("ring_vertex and ring_position are inverse") {
    for (int n = 0; n <= 4; ++n) {
        const Rect r = BoxSpec{n}.rect();
        const int len = static_cast<int>(boundary_layer(r).size());
        std::set<DualSite> seen;
        for (int k = 0; k < len; ++k) {
            const DualSite d = ring_vertex(r, k);
            CHECK(ring_position(r, d) == k);
            seen.insert(d);
        }
        CHECK(seen.size() == static_cast<std::size_t>(len));
        if (n >= 1) CHECK(ring_position(r, DualSite{1, 1}) == -1);
    }
}

TEST_CASE("in_dual_box uses sup-norm m + 1/2") {
    CHECK(in_dual_box(DualSite{1, 1}, 0));
    CHECK(in_dual_box(DualSite{-1, 1}, 0));
    CHECK_FALSE(in_dual_box(DualSite{3, 1}, 0));
    CHECK(in_dual_box(DualSite{3, -3}, 1));
}
