#include "ising/lattice.hpp"

#include <cstdlib>

#include "ising/errors.hpp"

namespace ising {

DualSite DualSite::from_half(int x2, int y2) {
    if ((x2 & 1) == 0 || (y2 & 1) == 0) throw DomainError("dual site coordinates must be odd halves");
    return DualSite{x2, y2};
}

int Rect::index(Site s) const {
    if (!contains(s)) return -1;
    return (s.y - y0) * width() + (s.x - x0);
}

Site Rect::site(int index) const {
    return Site{x0 + index % width(), y0 + index / width()};
}

std::vector<Site> rect_sites(const Rect& r) {
    std::vector<Site> out;
    out.reserve(r.size());
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0; x <= r.x1; ++x) out.push_back({x, y});
    return out;
}

std::vector<Site> box_sites(const BoxSpec& spec) { return rect_sites(spec.rect()); }

std::vector<DualSite> dual_rect(const Rect& r) {
    std::vector<DualSite> out;
    for (int y2 = 2 * r.y0 - 1; y2 <= 2 * r.y1 + 1; y2 += 2)
        for (int x2 = 2 * r.x0 - 1; x2 <= 2 * r.x1 + 1; x2 += 2) out.push_back({x2, y2});
    return out;
}

std::vector<DualSite> dual_box(const BoxSpec& spec) { return dual_rect(spec.rect()); }

std::vector<Site> boundary_layer(const Rect& r) {
    std::vector<Site> out;
    out.reserve(2 * (r.width() + r.height()));
    for (int x = r.x0; x <= r.x1; ++x) out.push_back({x, r.y0 - 1});
    for (int y = r.y0; y <= r.y1; ++y) out.push_back({r.x1 + 1, y});
    for (int x = r.x1; x >= r.x0; --x) out.push_back({x, r.y1 + 1});
    for (int y = r.y1; y >= r.y0; --y) out.push_back({r.x0 - 1, y});
    return out;
}

std::vector<Site> boundary_layer(const BoxSpec& spec) { return boundary_layer(spec.rect()); }

int boundary_layer_index(const Rect& r, Site s) {
    const int w = r.width(), h = r.height();
    if (s.y == r.y0 - 1 && s.x >= r.x0 && s.x <= r.x1) return s.x - r.x0;
    if (s.x == r.x1 + 1 && s.y >= r.y0 && s.y <= r.y1) return w + (s.y - r.y0);
    if (s.y == r.y1 + 1 && s.x >= r.x0 && s.x <= r.x1) return w + h + (r.x1 - s.x);
    if (s.x == r.x0 - 1 && s.y >= r.y0 && s.y <= r.y1) return 2 * w + h + (r.y1 - s.y);
    return -1;
}

namespace {

// Which side of the rectangle a layer position belongs to: 0 bottom, 1 right,
// 2 top, 3 left.
int layer_side(const Rect& r, int k) {
    const int w = r.width(), h = r.height();
    if (k < w) return 0;
    if (k < w + h) return 1;
    if (k < 2 * w + h) return 2;
    return 3;
}

}  // namespace

DualSite ring_vertex(const Rect& r, int k) {
    const auto layer = boundary_layer(r);
    const int len = static_cast<int>(layer.size());
    k = ((k % len) + len) % len;
    const Site a = layer[k];
    const Site b = layer[(k + 1) % len];
    int x2 = a.x + b.x, y2 = a.y + b.y;
    const int sa = layer_side(r, k), sb = layer_side(r, (k + 1) % len);
    if (sa == sb) {
        // Same side: step half a unit towards the interior.
        static const int nx[4] = {0, -1, 0, 1};
        static const int ny[4] = {1, 0, -1, 0};
        x2 += nx[sa];
        y2 += ny[sa];
    }
    return DualSite{x2, y2};
}

int ring_position(const Rect& r, DualSite d) {
    if ((d.x2 & 1) == 0 || (d.y2 & 1) == 0) return -1;
    const int w = r.width(), h = r.height();
    const int i = (d.x2 + 1) / 2 - r.x0, j = (d.y2 + 1) / 2 - r.y0;
    if (j == 0 && i >= 1 && i <= w) return i - 1;
    if (i == w && j >= 1 && j <= h) return w - 1 + j;
    if (j == h && i >= 0 && i <= w - 1) return w + h + (w - 1 - i);
    if (i == 0 && j >= 0 && j <= h - 1) return 2 * w + h + (h - 1 - j);
    return -1;
}

std::vector<Site> neighbors(Site s, Adjacency adj) {
    std::vector<Site> out{{s.x + 1, s.y}, {s.x - 1, s.y}, {s.x, s.y + 1}, {s.x, s.y - 1}};
    if (adj == Adjacency::SPath) {
        out.push_back({s.x - 1, s.y + 1});
        out.push_back({s.x + 1, s.y - 1});
    } else if (adj == Adjacency::CoSPath) {
        out.push_back({s.x + 1, s.y + 1});
        out.push_back({s.x - 1, s.y - 1});
    }
    return out;
}

bool adjacent(Site a, Site b, Adjacency adj) {
    const int dx = b.x - a.x, dy = b.y - a.y;
    if (std::abs(dx) + std::abs(dy) == 1) return true;
    if (adj == Adjacency::SPath) return (dx == -1 && dy == 1) || (dx == 1 && dy == -1);
    if (adj == Adjacency::CoSPath) return (dx == 1 && dy == 1) || (dx == -1 && dy == -1);
    return false;
}

bool in_dual_box(DualSite d, int m) {
    return std::abs(d.x2) <= 2 * m + 1 && std::abs(d.y2) <= 2 * m + 1;
}

}  // namespace ising
