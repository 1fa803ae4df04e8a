#include "ising/contour.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ising/errors.hpp"

namespace ising {

namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};
constexpr int kEnd = -2;

int opposite(int d) { return (d + 2) & 3; }

// Dual vertices of a rect as a (w+1) x (h+1) grid; vertex (i, j) sits at
// (x0 + i - 1/2, y0 + j - 1/2).
class DualGrid {
public:
    explicit DualGrid(const SpinConfiguration& c) : r_(c.rect()), w_(r_.width()), h_(r_.height()) {
        hedge_.assign(static_cast<std::size_t>(w_) * (h_ + 1), 0);
        vedge_.assign(static_cast<std::size_t>(w_ + 1) * h_, 0);
        virt_.assign(static_cast<std::size_t>(w_ + 1) * (h_ + 1), 0);
        for (int j = 0; j <= h_; ++j)
            for (int i = 0; i < w_; ++i) {
                const int x = r_.x0 + i, y = r_.y0 + j;
                hedge_[i + j * w_] = c.spin(x, y - 1) != c.spin(x, y);
            }
        for (int j = 0; j < h_; ++j)
            for (int i = 0; i <= w_; ++i) {
                const int x = r_.x0 + i, y = r_.y0 + j;
                vedge_[i + j * (w_ + 1)] = c.spin(x - 1, y) != c.spin(x, y);
            }
        for (int i = 1; i < w_; ++i) {
            const int x = r_.x0 + i;
            virt_[vid(i, 0)] = c.spin(x - 1, r_.y0 - 1) != c.spin(x, r_.y0 - 1);
            virt_[vid(i, h_)] = c.spin(x - 1, r_.y1 + 1) != c.spin(x, r_.y1 + 1);
        }
        for (int j = 1; j < h_; ++j) {
            const int y = r_.y0 + j;
            virt_[vid(0, j)] = c.spin(r_.x0 - 1, y - 1) != c.spin(r_.x0 - 1, y);
            virt_[vid(w_, j)] = c.spin(r_.x1 + 1, y - 1) != c.spin(r_.x1 + 1, y);
        }
        visited_h_.assign(hedge_.size(), 0);
        visited_v_.assign(vedge_.size(), 0);
    }

    int w() const { return w_; }
    int h() const { return h_; }
    int vid(int i, int j) const { return i + j * (w_ + 1); }
    DualSite site(int i, int j) const { return DualSite{2 * (r_.x0 + i) - 1, 2 * (r_.y0 + j) - 1}; }

    int outward(int i, int j) const {
        if (j == 0 && i > 0 && i < w_) return South;
        if (j == h_ && i > 0 && i < w_) return North;
        if (i == 0 && j > 0 && j < h_) return West;
        if (i == w_ && j > 0 && j < h_) return East;
        return kNoDir;
    }
    bool is_corner(int i, int j) const { return (i == 0 || i == w_) && (j == 0 || j == h_); }

    bool real(int i, int j, int d) const {
        switch (d) {
            case East: return i < w_ && hedge_[i + j * w_];
            case West: return i > 0 && hedge_[i - 1 + j * w_];
            case North: return j < h_ && vedge_[i + j * (w_ + 1)];
            default: return j > 0 && vedge_[i + (j - 1) * (w_ + 1)];
        }
    }
    bool virtual_edge(int i, int j) const { return virt_[vid(i, j)] != 0; }
    bool has(int i, int j, int d) const {
        return real(i, j, d) || (d == outward(i, j) && virtual_edge(i, j));
    }

    // Outgoing direction for a line arriving along direction `in` (as seen
    // from the vertex), or kEnd.
    int partner(int i, int j, int in) const {
        int deg = 0;
        for (int d = 0; d < 4; ++d) deg += has(i, j, d);
        int out;
        if (deg == 4) {
            static constexpr int pair4[4] = {North, East, South, West};
            out = pair4[in];
        } else if (deg == 2) {
            out = kEnd;
            for (int d = 0; d < 4; ++d)
                if (d != in && has(i, j, d)) out = d;
        } else if (deg == 1) {
            return kEnd;
        } else {
            throw DomainError("dual vertex of odd degree");
        }
        if (out == outward(i, j) && virtual_edge(i, j)) return kEnd;
        return out;
    }

    unsigned char& visited(int i, int j, int d) {
        switch (d) {
            case East: return visited_h_[i + j * w_];
            case West: return visited_h_[i - 1 + j * w_];
            case North: return visited_v_[i + j * (w_ + 1)];
            default: return visited_v_[i + (j - 1) * (w_ + 1)];
        }
    }

    // Walks from (i, j) along d until the line ends or meets a visited edge.
    std::vector<DualSite> trace(int i, int j, int d) {
        std::vector<DualSite> pts{site(i, j)};
        while (true) {
            unsigned char& v = visited(i, j, d);
            if (v) break;
            v = 1;
            i += kDx[d];
            j += kDy[d];
            pts.push_back(site(i, j));
            const int out = partner(i, j, opposite(d));
            if (out == kEnd) break;
            d = out;
        }
        return pts;
    }

private:
    Rect r_;
    int w_, h_;
    std::vector<unsigned char> hedge_, vedge_, virt_, visited_h_, visited_v_;
};

DualSite min_vertex(const Contour& g) { return *std::min_element(g.vertices.begin(), g.vertices.end()); }

bool contour_less(const Contour& a, const Contour& b) {
    const DualSite ma = min_vertex(a), mb = min_vertex(b);
    if (ma != mb) return ma < mb;
    return a.vertices < b.vertices;
}

// Rotate/reverse a closed vertex cycle so it starts at its smallest vertex
// on the smallest outgoing direction.
std::vector<DualSite> canonical_cycle(const std::vector<DualSite>& c) {
    const std::size_t n = c.size();
    const DualSite m = *std::min_element(c.begin(), c.end());
    int best_dir = 4;
    std::size_t best_p = 0;
    bool best_fwd = true;
    for (std::size_t p = 0; p < n; ++p) {
        if (c[p] != m) continue;
        const int f = direction_between(c[p], c[(p + 1) % n]);
        const int b = direction_between(c[p], c[(p + n - 1) % n]);
        if (f < best_dir) best_dir = f, best_p = p, best_fwd = true;
        if (b < best_dir) best_dir = b, best_p = p, best_fwd = false;
    }
    std::vector<DualSite> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = best_fwd ? c[(best_p + k) % n] : c[(best_p + n - k) % n];
    return out;
}

}  // namespace

DualEdge DualEdge::make(DualSite p, DualSite q) { return p < q ? DualEdge{p, q} : DualEdge{q, p}; }

std::vector<DualEdge> Contour::edges() const {
    std::vector<DualEdge> out;
    for (std::size_t k = 0; k + 1 < vertices.size(); ++k) out.push_back(DualEdge::make(vertices[k], vertices[k + 1]));
    if (closed && vertices.size() > 1) out.push_back(DualEdge::make(vertices.back(), vertices.front()));
    return out;
}

DualSite step(DualSite d, int dir) { return DualSite{d.x2 + 2 * kDx[dir], d.y2 + 2 * kDy[dir]}; }

int direction_between(DualSite from, DualSite to) {
    const int dx = to.x2 - from.x2, dy = to.y2 - from.y2;
    for (int d = 0; d < 4; ++d)
        if (dx == 2 * kDx[d] && dy == 2 * kDy[d]) return d;
    throw DomainError("dual vertices are not adjacent");
}

int outward_direction(const Rect& r, DualSite d) {
    const int w = r.width(), h = r.height();
    const int i = (d.x2 + 1) / 2 - r.x0, j = (d.y2 + 1) / 2 - r.y0;
    if (j == 0 && i > 0 && i < w) return South;
    if (j == h && i > 0 && i < w) return North;
    if (i == 0 && j > 0 && j < h) return West;
    if (i == w && j > 0 && j < h) return East;
    return kNoDir;
}

DualEdgeSet edge_set(const SpinConfiguration& c) {
    DualEdgeSet out{c.rect(), {}};
    const Rect& r = c.rect();
    for (int y = r.y0 - 1; y <= r.y1; ++y)
        for (int x = r.x0; x <= r.x1; ++x)
            if (c.spin(x, y) != c.spin(x, y + 1))
                out.edges.push_back(DualEdge::make({2 * x - 1, 2 * y + 1}, {2 * x + 1, 2 * y + 1}));
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0 - 1; x <= r.x1; ++x)
            if (c.spin(x, y) != c.spin(x + 1, y))
                out.edges.push_back(DualEdge::make({2 * x + 1, 2 * y - 1}, {2 * x + 1, 2 * y + 1}));
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

EndpointSet endpoints_of_bc(const BoundaryCondition& bc) {
    EndpointSet e;
    e.ring_positions = bc.sign_changes();
    for (int k : e.ring_positions) e.points.push_back(ring_vertex(bc.rect(), k));
    return e;
}

EndpointSet endpoints_of_bc(const BoundaryCondition& bc, const BoxSpec& box) {
    if (!(bc.rect() == box.rect())) throw DomainError("boundary condition does not belong to the box");
    return endpoints_of_bc(bc);
}

ContourFamily extract_contours(const SpinConfiguration& c) {
    DualGrid g(c);
    const Rect& r = c.rect();
    ContourFamily fam;
    fam.rect = r;
    const int w = g.w(), h = g.h();
    const int len = 2 * (w + h);
    for (int k = 0; k < len; ++k) {
        const DualSite v = ring_vertex(r, k);
        const int i = (v.x2 + 1) / 2 - r.x0, j = (v.y2 + 1) / 2 - r.y0;
        int start = kNoDir;
        if (g.is_corner(i, j)) {
            int deg = 0;
            for (int d = 0; d < 4; ++d)
                if (g.real(i, j, d)) ++deg, start = d;
            if (deg != 1) continue;
        } else {
            if (!g.virtual_edge(i, j)) continue;
            start = g.partner(i, j, g.outward(i, j));
        }
        if (g.visited(i, j, start)) continue;
        Contour ct;
        ct.vertices = g.trace(i, j, start);
        if (ct.back() < ct.front()) std::reverse(ct.vertices.begin(), ct.vertices.end());
        int a = ring_position(r, ct.front()), b = ring_position(r, ct.back());
        fam.matching.push_back({std::min(a, b), std::max(a, b)});
        fam.open_contours.push_back(std::move(ct));
    }
    for (int j = 0; j <= h; ++j)
        for (int i = 0; i <= w; ++i)
            for (int d : {East, North}) {
                if (!g.real(i, j, d) || g.visited(i, j, d)) continue;
                auto pts = g.trace(i, j, d);
                pts.pop_back();  // back at the start
                fam.closed_contours.push_back(Contour{canonical_cycle(pts), true});
            }
    std::sort(fam.open_contours.begin(), fam.open_contours.end(), contour_less);
    std::sort(fam.closed_contours.begin(), fam.closed_contours.end(), contour_less);
    std::sort(fam.matching.begin(), fam.matching.end());
    return fam;
}

std::vector<Passage> passages(const Contour& g, const Rect& r) {
    std::vector<Passage> out;
    const std::size_t n = g.vertices.size();
    for (std::size_t k = 0; k < n; ++k) {
        Passage p{g.vertices[k]};
        const bool has_prev = g.closed || k > 0;
        const bool has_next = g.closed || k + 1 < n;
        if (has_prev) p.first = direction_between(g.vertices[k], g.vertices[(k + n - 1) % n]);
        if (has_next) p.second = direction_between(g.vertices[k], g.vertices[(k + 1) % n]);
        if (!has_prev) p.first = outward_direction(r, p.at);
        if (!has_next) p.second = outward_direction(r, p.at);
        out.push_back(p);
    }
    return out;
}

std::string polyline_key(const Contour& g) {
    std::ostringstream os;
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
        if (k) os << ';';
        os << g.vertices[k].x2 << ',' << g.vertices[k].y2;
    }
    return os.str();
}

std::string family_key(const ContourFamily& f) {
    std::string s;
    for (std::size_t k = 0; k < f.open_contours.size(); ++k) {
        if (k) s += '|';
        s += polyline_key(f.open_contours[k]);
    }
    return s;
}

bool meets_dual_box(const Contour& g, int m) {
    return std::any_of(g.vertices.begin(), g.vertices.end(), [m](DualSite d) { return in_dual_box(d, m); });
}

int crossing_count(const ContourFamily& f, const BoxSpec& probe) {
    const Rect& r = f.rect;
    if (!(r.contains({-probe.n, -probe.n}) && r.contains({probe.n, probe.n})))
        throw DomainError("probe box must lie inside the outer box");
    int n = 0;
    for (const auto& g : f.open_contours) n += meets_dual_box(g, probe.n);
    return n;
}

bool circuit_event(const SpinConfiguration& c, const BoxSpec& core, int sign) {
    const Rect& r = c.rect();
    const Rect cr = core.rect();
    if (!(cr.x0 > r.x0 && cr.x1 < r.x1 && cr.y0 > r.y0 && cr.y1 < r.y1))
        throw DomainError("core must lie strictly inside the box");
    // Union-find over blocking sites (core, or spin != sign) with s-path
    // adjacency; a surrounding circuit exists iff core and outside stay apart.
    const int n = r.size();
    const int core_node = n, outside_node = n + 1;
    std::vector<int> parent(n + 2);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    auto blocked = [&](int x, int y) { return cr.contains({x, y}) || c.spin(x, y) != sign; };
    static constexpr int fwd[3][2] = {{1, 0}, {0, 1}, {1, -1}};
    for (int y = r.y0; y <= r.y1; ++y)
        for (int x = r.x0; x <= r.x1; ++x) {
            if (!blocked(x, y)) continue;
            const int id = r.index({x, y});
            if (cr.contains({x, y})) unite(id, core_node);
            if (x == r.x0 || x == r.x1 || y == r.y0 || y == r.y1) unite(id, outside_node);
            for (const auto& s : fwd) {
                const int nx = x + s[0], ny = y + s[1];
                if (r.contains({nx, ny}) && blocked(nx, ny)) unite(id, r.index({nx, ny}));
            }
        }
    return find(core_node) != find(outside_node);
}

std::map<int, std::vector<double>> interface_height_profile(const ContourFamily& f) {
    if (f.open_contours.size() != 1) throw NotSingleInterface("expected exactly one open contour");
    std::map<int, std::vector<double>> out;
    for (const DualEdge& e : f.open_contours[0].edges()) {
        if (e.a.y2 != e.b.y2) continue;
        const int x = (e.a.x2 + 1) / 2;  // site column between a and b
        out[x].push_back(0.5 * e.a.y2);
    }
    for (auto& [x, v] : out) std::sort(v.begin(), v.end());
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) throw DomainError("median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string check_reconstruction(const SpinConfiguration& c, const ContourFamily& f) {
    std::vector<DualEdge> all;
    for (const auto* list : {&f.open_contours, &f.closed_contours})
        for (const auto& g : *list) {
            const auto e = g.edges();
            all.insert(all.end(), e.begin(), e.end());
        }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) return "contours share an edge";
    if (all != edge_set(c).edges) return "contour edges differ from E(sigma)";
    return {};
}

std::string check_endpoints(const ContourFamily& f, const BoundaryCondition& bc) {
    std::vector<int> ends;
    for (const auto& g : f.open_contours) {
        ends.push_back(ring_position(f.rect, g.front()));
        ends.push_back(ring_position(f.rect, g.back()));
    }
    std::sort(ends.begin(), ends.end());
    if (ends != endpoints_of_bc(bc).ring_positions) return "open-contour endpoints differ from b(omega)";
    return {};
}

bool chords_cross(std::pair<int, int> p, std::pair<int, int> q) {
    auto [a, b] = p;
    auto [c, d] = q;
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    const bool c_in = a < c && c < b, d_in = a < d && d < b;
    return c_in != d_in;
}

std::string check_matching(const ContourFamily& f) {
    for (std::size_t i = 0; i < f.matching.size(); ++i)
        for (std::size_t j = i + 1; j < f.matching.size(); ++j)
            if (chords_cross(f.matching[i], f.matching[j])) return "matching has crossing chords";
    if (f.matching.size() != f.open_contours.size()) return "matching size differs from open contour count";
    return {};
}

std::string check_no_spath_crossing(const SpinConfiguration& c, const ContourFamily& f) {
    const Rect& r = c.rect();
    auto known = [&](Site s) { return r.contains(s) || boundary_layer_index(r, s) >= 0; };
    for (const auto* list : {&f.open_contours, &f.closed_contours})
        for (const auto& g : *list)
            for (const Passage& p : passages(g, r)) {
                if (p.first == kNoDir || p.second == kNoDir) continue;
                // NW and SE sites around the dual vertex.
                const Site nw{(p.at.x2 - 1) / 2, (p.at.y2 + 1) / 2};
                const Site se{nw.x + 1, nw.y - 1};
                if (!known(nw) || !known(se) || c.spin(nw) != c.spin(se)) continue;
                const int a = std::min(p.first, p.second), b = std::max(p.first, p.second);
                const bool separates = (a == North && b == West) || (a == East && b == South) ||
                                       (a == North && b == South) || (a == East && b == West);
                if (separates) return "a contour separates an s-path diagonal pair";
            }
    return {};
}

}  // namespace ising
