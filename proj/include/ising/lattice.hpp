#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace ising {

struct Site {
    int x = 0;
    int y = 0;
    auto operator<=>(const Site&) const = default;
};

// A vertex of the dual lattice (1/2,1/2) + Z^2, stored with doubled
// coordinates so that both components are odd integers.
struct DualSite {
    int x2 = 1;
    int y2 = 1;
    auto operator<=>(const DualSite&) const = default;

    static DualSite from_half(int x2, int y2);
    double x() const { return 0.5 * x2; }
    double y() const { return 0.5 * y2; }
};

// Axis-aligned rectangle of sites [x0,x1] x [y0,y1]. Square boxes are the
// common case; rectangles are used by the exact engines.
struct Rect {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0;

    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
    int size() const { return width() * height(); }
    bool contains(Site s) const { return s.x >= x0 && s.x <= x1 && s.y >= y0 && s.y <= y1; }
    // Row-major canonical index; -1 outside.
    int index(Site s) const;
    Site site(int index) const;
    bool operator==(const Rect&) const = default;
};

struct BoxSpec {
    int n = 0;
    Rect rect() const { return Rect{-n, n, -n, n}; }
    int side() const { return 2 * n + 1; }
};

enum class Adjacency { NearestNeighbor, SPath, CoSPath };

std::vector<Site> box_sites(const BoxSpec& spec);
std::vector<Site> rect_sites(const Rect& r);

std::vector<DualSite> dual_box(const BoxSpec& spec);
std::vector<DualSite> dual_rect(const Rect& r);

// Exterior sites at l1-distance 1, walked counterclockwise starting at the
// left end of the bottom side. Corners of the enclosing square are absent.
std::vector<Site> boundary_layer(const BoxSpec& spec);
std::vector<Site> boundary_layer(const Rect& r);
// Position of s in boundary_layer(r), or -1.
int boundary_layer_index(const Rect& r, Site s);

// Dual vertex on the outer dual ring sitting between boundary-layer sites k
// and k+1 (mod the layer length). A sign change of the boundary condition
// between those two sites puts an open-contour endpoint here.
DualSite ring_vertex(const Rect& r, int k);
// Inverse of ring_vertex, -1 if d is not on the outer dual ring.
int ring_position(const Rect& r, DualSite d);

std::vector<Site> neighbors(Site s, Adjacency adj);

// True if a and b are adjacent under adj.
bool adjacent(Site a, Site b, Adjacency adj);

// Dual box of Lambda_m contains d (sup-norm at most m + 1/2).
bool in_dual_box(DualSite d, int m);

}  // namespace ising
