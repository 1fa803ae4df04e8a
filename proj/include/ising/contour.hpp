#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ising/boundary.hpp"
#include "ising/lattice.hpp"
#include "ising/spins.hpp"

namespace ising {

// Dual directions, in this order everywhere.
enum Dir : int { East = 0, North = 1, West = 2, South = 3 };
constexpr int kNoDir = -1;

struct DualEdge {
    DualSite a;  // a < b
    DualSite b;
    auto operator<=>(const DualEdge&) const = default;
    static DualEdge make(DualSite p, DualSite q);
};

struct DualEdgeSet {
    Rect rect;
    std::vector<DualEdge> edges;  // sorted
};

struct Contour {
    std::vector<DualSite> vertices;  // closed contours do not repeat the first vertex
    bool closed = false;

    std::size_t length() const { return closed ? vertices.size() : vertices.size() - 1; }
    const DualSite& front() const { return vertices.front(); }
    const DualSite& back() const { return vertices.back(); }
    std::vector<DualEdge> edges() const;
};

// How a contour goes through one dual vertex: the two directions it uses.
// An endpoint on a side of the ring uses the outward (virtual) direction; an
// endpoint at a ring corner has second == kNoDir.
struct Passage {
    DualSite at;
    int first = kNoDir;
    int second = kNoDir;
};

struct EndpointSet {
    std::vector<int> ring_positions;  // increasing
    std::vector<DualSite> points;
};

struct ContourFamily {
    Rect rect;
    std::vector<Contour> open_contours;
    std::vector<Contour> closed_contours;
    // Ring positions of the two ends of each open contour, smaller first,
    // sorted.
    std::vector<std::pair<int, int>> matching;
};

DualEdgeSet edge_set(const SpinConfiguration& c);
EndpointSet endpoints_of_bc(const BoundaryCondition& bc);
EndpointSet endpoints_of_bc(const BoundaryCondition& bc, const BoxSpec& box);

ContourFamily extract_contours(const SpinConfiguration& c);

// Passages of a contour traced inside rect r.
std::vector<Passage> passages(const Contour& g, const Rect& r);
// Outward direction of a side vertex of the dual ring, kNoDir elsewhere.
int outward_direction(const Rect& r, DualSite d);
DualSite step(DualSite d, int dir);
int direction_between(DualSite from, DualSite to);

// Canonical text form of the open contours, used as a grouping key.
std::string family_key(const ContourFamily& f);
std::string polyline_key(const Contour& g);

int crossing_count(const ContourFamily& f, const BoxSpec& probe);
bool meets_dual_box(const Contour& g, int m);

// Existence of a circuit of `sign` spins (s-path adjacency) in the box minus
// the core that surrounds the core.
bool circuit_event(const SpinConfiguration& c, const BoxSpec& core, int sign);

// Column x -> sorted heights y + 1/2 of the horizontal edges of the single
// open contour separating (x, y) from (x, y + 1).
std::map<int, std::vector<double>> interface_height_profile(const ContourFamily& f);
double median(std::vector<double> v);

// Invariant checks; each returns an empty string or a description of the
// first violation.
std::string check_reconstruction(const SpinConfiguration& c, const ContourFamily& f);
std::string check_endpoints(const ContourFamily& f, const BoundaryCondition& bc);
std::string check_matching(const ContourFamily& f);
std::string check_no_spath_crossing(const SpinConfiguration& c, const ContourFamily& f);

// True if the chords (a,b) and (c,d) on a circle cross.
bool chords_cross(std::pair<int, int> p, std::pair<int, int> q);

}  // namespace ising
