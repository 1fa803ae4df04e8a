#include "ising/duality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "ising/enumerate.hpp"
#include "ising/errors.hpp"
#include "ising/spins.hpp"

namespace ising {

namespace {

double rel_diff(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
    return std::abs(a - b) / s;
}

// Visits every interior configuration of bc (bit k set means -1 at
// canonical index k).
template <class F>
void for_each_config(const BoundaryCondition& bc, F&& fn) {
    const Rect& r = bc.rect();
    const int n = r.size();
    if (n > kEnumerationCap) throw CapacityExceeded("box exceeds the enumeration capacity");
    SpinConfiguration c(bc);
    const auto sites = rect_sites(r);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        for (int k = 0; k < n; ++k) c.set(sites[k], ((bits >> k) & 1) ? -1 : 1);
        fn(c);
    }
}

ContourFamily open_part(const ContourFamily& f) {
    ContourFamily g;
    g.rect = f.rect;
    g.open_contours = f.open_contours;
    g.matching = f.matching;
    return g;
}

ContourFamily family_of(const Rect& r, std::vector<Contour> open) {
    ContourFamily f;
    f.rect = r;
    for (const auto& g : open) {
        const int a = ring_position(r, g.front()), b = ring_position(r, g.back());
        f.matching.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(f.matching.begin(), f.matching.end());
    f.open_contours = std::move(open);
    return f;
}

std::vector<int> endpoints_of(const Rect& r, const std::vector<Contour>& open) {
    std::vector<int> out;
    for (const auto& g : open) {
        out.push_back(ring_position(r, g.front()));
        out.push_back(ring_position(r, g.back()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_rule_pair(int a, int b) {
    if (a > b) std::swap(a, b);
    return (a == East && b == North) || (a == West && b == South);
}

// Sites on either side of a dual edge.
std::pair<Site, Site> bond_across(const DualEdge& e) {
    if (e.a.y2 == e.b.y2) {
        const int x = (std::min(e.a.x2, e.b.x2) + 1) / 2;
        return {{x, (e.a.y2 - 1) / 2}, {x, (e.a.y2 + 1) / 2}};
    }
    const int y = (std::min(e.a.y2, e.b.y2) + 1) / 2;
    return {{(e.a.x2 - 1) / 2, y}, {(e.a.x2 + 1) / 2, y}};
}

struct PrefixBonds {
    std::vector<std::pair<Site, Site>> bonds;
    std::vector<bool> flips;
};

// Bonds crossing prefix edges plus every bond at a vertex where the prefix
// passage is not a pair of the deformation rule.
PrefixBonds prefix_bonds(const Rect& r, const std::vector<Contour>& prefix) {
    std::set<DualEdge> pe;
    for (const auto& g : prefix)
        for (const auto& e : g.edges()) pe.insert(e);
    auto known = [&](Site s) { return r.contains(s) || boundary_layer_index(r, s) >= 0; };
    std::set<std::pair<Site, Site>> bonds;
    auto add = [&](Site a, Site b) {
        if (b < a) std::swap(a, b);
        if (known(a) && known(b) && (r.contains(a) || r.contains(b))) bonds.insert({a, b});
    };
    for (const auto& e : pe) {
        const auto [a, b] = bond_across(e);
        add(a, b);
    }
    for (const auto& g : prefix)
        for (const Passage& p : passages(g, r)) {
            if (p.first != kNoDir && p.second != kNoDir && is_rule_pair(p.first, p.second)) continue;
            const Site nw{(p.at.x2 - 1) / 2, (p.at.y2 + 1) / 2};
            const Site ne{nw.x + 1, nw.y}, sw{nw.x, nw.y - 1}, se{nw.x + 1, nw.y - 1};
            add(nw, ne);
            add(sw, se);
            add(nw, sw);
            add(ne, se);
        }
    PrefixBonds out;
    for (const auto& [a, b] : bonds) {
        out.bonds.push_back({a, b});
        DualEdge e;
        if (a.y == b.y) e = DualEdge::make({2 * a.x + 1, 2 * a.y - 1}, {2 * a.x + 1, 2 * a.y + 1});
        else e = DualEdge::make({2 * a.x - 1, 2 * a.y + 1}, {2 * a.x + 1, 2 * a.y + 1});
        out.flips.push_back(pe.count(e) > 0);
    }
    return out;
}

// Propagates boundary values through the bonds; false on a conflict.
bool flood_fill(const BoundaryCondition& bc, const PrefixBonds& pb, bool use_flips, std::map<Site, int>& values) {
    const Rect& r = bc.rect();
    std::map<Site, std::vector<std::pair<Site, int>>> adj;
    for (std::size_t k = 0; k < pb.bonds.size(); ++k) {
        const int rel = (use_flips && pb.flips[k]) ? -1 : 1;
        adj[pb.bonds[k].first].push_back({pb.bonds[k].second, rel});
        adj[pb.bonds[k].second].push_back({pb.bonds[k].first, rel});
    }
    std::map<Site, int> val;
    std::deque<Site> queue;
    for (const Site& s : boundary_layer(r)) {
        val[s] = bc.at(s);
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const Site s = queue.front();
        queue.pop_front();
        const auto it = adj.find(s);
        if (it == adj.end()) continue;
        for (const auto& [t, rel] : it->second) {
            const int v = val[s] * rel;
            const auto jt = val.find(t);
            if (jt == val.end()) {
                val[t] = v;
                queue.push_back(t);
            } else if (jt->second != v) {
                return false;
            }
        }
    }
    values.clear();
    for (const auto& [s, v] : val)
        if (r.contains(s)) values[s] = v;
    return true;
}

nlohmann::json ring_json(const std::vector<int>& v) { return nlohmann::json(v); }

}  // namespace

double dual_beta(double beta) {
    if (!(beta > 0)) throw DomainError("dual temperature needs beta > 0");
    return std::atanh(std::exp(-2.0 * beta));
}

double dual_correlation(const Rect& r, double beta_star, const std::vector<DualSite>& sites) {
    if (sites.size() % 2) throw OddSiteCount("dual correlation needs an even number of sites");
    const int w = r.width(), h = r.height();
    if ((w + 1) * (h + 1) > kEnumerationCap) throw CapacityExceeded("dual box exceeds the enumeration capacity");
    // Dual vertex (i, j) is stored as site (i, j) of a free (w+1) x (h+1) grid.
    std::vector<Site> grid;
    for (int j = 0; j <= h; ++j)
        for (int i = 0; i <= w; ++i) grid.push_back({i, j});
    const SpinSystem sys = SpinSystem::build(grid, [](Site) { return 0; });
    std::map<int, int> mult;
    for (const DualSite& d : sites) {
        const int i = (d.x2 + 1) / 2 - r.x0, j = (d.y2 + 1) / 2 - r.y0;
        if (i < 0 || i > w || j < 0 || j > h || (d.x2 & 1) == 0 || (d.y2 & 1) == 0)
            throw SupportOutOfBox("dual site outside the dual box");
        mult[sys.index_of({i, j})] ^= 1;
    }
    EnumerationOptions opt;
    opt.mode = EnergyHistogram::Mode::Parity;
    for (const auto& [idx, odd] : mult)
        if (odd) opt.support.push_back(idx);
    if (opt.support.empty()) return 1.0;
    return enumerate_histogram(sys, opt).expectation(beta_star, {1.0, -1.0});
}

double dual_correlation(const BoxSpec& box, double beta_star, const std::vector<DualSite>& sites) {
    return dual_correlation(box.rect(), beta_star, sites);
}

FamilyTable::FamilyTable(const BoundaryCondition& bc) : bc_(bc) {
    const int nb = bond_count(bc.rect());
    plus_counts_.assign(nb + 1, 0);
    for_each_config(BoundaryCondition::plus(bc.rect()), [&](const SpinConfiguration& c) { ++plus_counts_[unequal_bonds(c)]; });
    for_each_config(bc, [&](const SpinConfiguration& c) {
        const ContourFamily f = extract_contours(c);
        const std::string key = family_key(f);
        auto it = entries_.find(key);
        if (it == entries_.end()) it = entries_.emplace(key, Entry{open_part(f), std::vector<std::uint64_t>(nb + 1, 0)}).first;
        ++it->second.counts[unequal_bonds(c)];
    });
}

double FamilyTable::plus_sum(double beta) const {
    double s = 0;
    for (std::size_t e = 0; e < plus_counts_.size(); ++e) s += static_cast<double>(plus_counts_[e]) * std::exp(-2.0 * beta * e);
    return s;
}

double FamilyTable::weight(const Entry& en, double beta) const {
    double s = 0;
    for (std::size_t e = 0; e < en.counts.size(); ++e) s += static_cast<double>(en.counts[e]) * std::exp(-2.0 * beta * e);
    return s / plus_sum(beta);
}

double FamilyTable::weight(const std::string& key, double beta) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : weight(it->second, beta);
}

double FamilyTable::total(double beta) const {
    double s = 0;
    for (const auto& [k, e] : entries_) s += weight(e, beta);
    return s;
}

const FamilyTable& TableCache::get(const std::vector<int>& ring_positions) {
    std::vector<int> key = ring_positions;
    std::sort(key.begin(), key.end());
    auto it = tables_.find(key);
    if (it == tables_.end())
        it = tables_.emplace(key, std::make_unique<FamilyTable>(BoundaryCondition::from_endpoints(rect_, key))).first;
    return *it->second;
}

CheckReport duality_identity_check(const BoundaryCondition& bc, double beta) {
    const Rect& r = bc.rect();
    const double lz = enumerate_histogram(SpinSystem::box(bc)).log_partition(beta);
    const double lz_plus = enumerate_histogram(SpinSystem::box(BoundaryCondition::plus(r))).log_partition(beta);
    const double ratio = std::exp(lz - lz_plus);
    const double middle = FamilyTable(bc).total(beta);
    const double right = dual_correlation(r, dual_beta(beta), endpoints_of_bc(bc).points);
    CheckReport rep;
    rep.check = "duality_identity";
    rep.params = {{"bc", bc.name()}, {"beta", beta}, {"rect", {r.x0, r.x1, r.y0, r.y1}}, {"q_sum", middle}};
    rep.lhs = ratio;
    rep.rhs = right;
    rep.margin = std::max({rel_diff(ratio, middle), rel_diff(middle, right), rel_diff(ratio, right)});
    rep.passed = rep.margin <= kIdentityTolerance;
    return rep;
}

CheckReport weight_upper_bound_check(const Rect& r, double beta, int i, int j, const TauFunction& tau, TableCache* cache) {
    TableCache local(r);
    TableCache& tc = cache ? *cache : local;
    if (i == j) throw DomainError("upper bound needs two distinct ring positions");
    const double sum = tc.get({i, j}).total(beta);
    const DualSite a = ring_vertex(r, i), b = ring_vertex(r, j);
    const double dx = 0.5 * (b.x2 - a.x2), dy = 0.5 * (b.y2 - a.y2);
    CheckReport rep;
    rep.check = "weight_upper_bound";
    rep.params = {{"beta", beta}, {"i", i}, {"j", j}, {"dx", dx}, {"dy", dy}};
    rep.lhs = sum;
    rep.rhs = std::exp(-tau(dx, dy));
    rep.margin = rep.rhs - rep.lhs;
    rep.passed = rep.margin >= 0;
    return rep;
}

CheckReport bk_inequality_check(const Rect& r, double beta, const std::vector<int>& b1, const std::vector<int>& b2,
                                TableCache* cache) {
    TableCache local(r);
    TableCache& tc = cache ? *cache : local;
    std::set<int> s1(b1.begin(), b1.end()), s2(b2.begin(), b2.end());
    if (s1.size() != b1.size() || s2.size() != b2.size()) throw DomainError("endpoint sets must not repeat positions");
    std::vector<int> all;
    for (int k : s1) {
        if (s2.count(k)) throw DomainError("endpoint sets must be disjoint");
        all.push_back(k);
    }
    all.insert(all.end(), s2.begin(), s2.end());
    std::sort(all.begin(), all.end());
    const double left = tc.get(b1).total(beta) * tc.get(b2).total(beta);
    const FamilyTable& joint = tc.get(all);
    double js = 0;
    for (const auto& [key, e] : joint.entries()) {
        bool ok = true;
        for (const auto& [p, q] : e.family.matching)
            ok = ok && ((s1.count(p) && s1.count(q)) || (s2.count(p) && s2.count(q)));
        if (ok) js += joint.weight(e, beta);
    }
    CheckReport rep;
    rep.check = "bk_inequality";
    rep.params = {{"beta", beta}, {"b1", ring_json(b1)}, {"b2", ring_json(b2)}};
    rep.lhs = js;
    rep.rhs = left;
    rep.margin = left - js;
    rep.passed = rep.margin >= -1e-14 * std::max(1.0, left);
    return rep;
}

ReducedDomain reduced_domain(const BoundaryCondition& bc, const std::vector<Contour>& prefix) {
    const Rect& r = bc.rect();
    const auto changes = bc.sign_changes();
    for (int k : endpoints_of(r, prefix))
        if (!std::binary_search(changes.begin(), changes.end(), k))
            throw IncompatibleFamily("prefix endpoint is not a sign change of the boundary condition");
    const PrefixBonds pb = prefix_bonds(r, prefix);
    ReducedDomain rd;
    rd.removed_bonds = pb.bonds;
    rd.flips = pb.flips;
    if (!flood_fill(bc, pb, true, rd.determined)) throw IncompatibleFamily("prefix contours force conflicting spins");
    return rd;
}

std::map<std::string, double> reduced_weights(const Rect& r, const std::vector<Contour>& prefix,
                                              const BoundaryCondition& bc_rest, double beta) {
    const PrefixBonds pb = prefix_bonds(r, prefix);
    const auto sites = rect_sites(r);
    // Sum of exp(-2 beta |E|) over configurations of bc with the prefix bonds
    // unbroken and frozen spins fixed by the flood fill.
    auto run = [&](const BoundaryCondition& bc, bool group) {
        std::map<std::string, double> out;
        std::map<Site, int> frozen;
        if (!flood_fill(bc, pb, false, frozen)) return out;
        std::vector<Site> free;
        for (const Site& s : sites)
            if (!frozen.count(s)) free.push_back(s);
        if (static_cast<int>(free.size()) > kEnumerationCap) throw CapacityExceeded("reduced box exceeds the enumeration capacity");
        SpinConfiguration c(bc);
        for (const auto& [s, v] : frozen) c.set(s, v);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free.size()); ++bits) {
            for (std::size_t k = 0; k < free.size(); ++k) c.set(free[k], ((bits >> k) & 1) ? -1 : 1);
            bool ok = true;
            for (const auto& [a, b] : pb.bonds)
                if (c.spin(a) != c.spin(b)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            const double w = std::exp(-2.0 * beta * unequal_bonds(c));
            out[group ? family_key(extract_contours(c)) : std::string()] += w;
        }
        return out;
    };
    auto num = run(bc_rest, true);
    const auto den = run(BoundaryCondition::plus(r), false);
    const double d = den.count("") ? den.at("") : 0.0;
    if (!(d > 0)) throw IncompatibleFamily("reduced domain has no admissible configuration");
    for (auto& [k, v] : num) v /= d;
    return num;
}

CheckReport factorization_check(const BoundaryCondition& bc, double beta, const ContourFamily& family, int k, TableCache* cache) {
    const Rect& r = bc.rect();
    TableCache local(r);
    TableCache& tc = cache ? *cache : local;
    const int m = static_cast<int>(family.open_contours.size());
    if (k < 0 || k > m) throw DomainError("prefix length out of range");
    const std::vector<Contour> prefix(family.open_contours.begin(), family.open_contours.begin() + k);
    const std::vector<Contour> rest(family.open_contours.begin() + k, family.open_contours.end());
    reduced_domain(bc, prefix);
    const double q_all = tc.get(bc.sign_changes()).weight(family_key(family), beta);
    const double q_prefix = tc.get(endpoints_of(r, prefix)).weight(family_key(family_of(r, prefix)), beta);
    const BoundaryCondition bc_rest = BoundaryCondition::from_endpoints(r, endpoints_of(r, rest));
    const auto red = reduced_weights(r, prefix, bc_rest, beta);
    const auto it = red.find(family_key(family_of(r, rest)));
    const double q_rest = it == red.end() ? 0.0 : it->second;
    CheckReport rep;
    rep.check = "factorization";
    rep.params = {{"bc", bc.name()}, {"beta", beta}, {"family", family_key(family)}, {"k", k}};
    rep.lhs = q_all;
    rep.rhs = q_prefix * q_rest;
    rep.margin = rel_diff(rep.lhs, rep.rhs);
    rep.passed = rep.margin <= kIdentityTolerance;
    return rep;
}

CheckReport marginal_check(const Rect& r, double beta, const std::vector<int>& endpoints, TableCache* cache) {
    TableCache local(r);
    TableCache& tc = cache ? *cache : local;
    const FamilyTable& t = tc.get(endpoints);
    struct Pair {
        double lhs = 0;
        std::vector<Contour> contours;
    };
    std::map<std::string, Pair> pairs;
    for (const auto& [key, e] : t.entries()) {
        const auto& oc = e.family.open_contours;
        const double q = t.weight(e, beta);
        for (std::size_t a = 0; a < oc.size(); ++a)
            for (std::size_t b = a + 1; b < oc.size(); ++b) {
                std::vector<Contour> two{oc[a], oc[b]};
                const std::string pk = family_key(family_of(r, two));
                auto& p = pairs[pk];
                p.lhs += q;
                p.contours = two;
            }
    }
    CheckReport rep;
    rep.check = "marginal";
    rep.params = {{"beta", beta}, {"endpoints", ring_json(endpoints)}, {"pairs", pairs.size()}};
    rep.margin = std::numeric_limits<double>::infinity();
    rep.passed = true;
    for (const auto& [pk, p] : pairs) {
        const double rhs = tc.get(endpoints_of(r, p.contours)).weight(pk, beta);
        const double margin = rhs - p.lhs;
        if (margin < rep.margin) {
            rep.margin = margin;
            rep.lhs = p.lhs;
            rep.rhs = rhs;
            rep.params["worst_pair"] = pk;
        }
        if (margin < -1e-14 * std::max(1e-300, rhs)) rep.passed = false;
    }
    if (pairs.empty()) rep.margin = 0.0;
    return rep;
}

CheckReport point_passing_check(const Rect& r, double beta, int b, int b2, DualSite z, TableCache* cache) {
    TableCache local(r);
    TableCache& tc = cache ? *cache : local;
    const FamilyTable& t = tc.get({b, b2});
    double lhs = 0;
    for (const auto& [key, e] : t.entries()) {
        const auto& v = e.family.open_contours.at(0).vertices;
        if (std::find(v.begin(), v.end(), z) != v.end()) lhs += t.weight(e, beta);
    }
    const double bs = dual_beta(beta);
    const DualSite pb = ring_vertex(r, b), pb2 = ring_vertex(r, b2);
    const double rhs = dual_correlation(r, bs, {pb, z}) * dual_correlation(r, bs, {z, pb2});
    CheckReport rep;
    rep.check = "point_passing";
    rep.params = {{"beta", beta}, {"b", b}, {"b2", b2}, {"z", {z.x2, z.y2}}};
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.margin = rhs - lhs;
    rep.passed = rep.margin >= -1e-14 * std::max(1.0, rhs);
    return rep;
}

namespace {

struct Tally {
    CatalogSummary s;
    bool first = true;
    // `lower_is_worse`: inequality margins; otherwise discrepancies.
    void add(const CheckReport& rep, bool lower_is_worse) {
        ++s.cases;
        if (!rep.passed) ++s.failures;
        const bool worse = first || (lower_is_worse ? rep.margin < s.worst_margin : rep.margin > s.worst_margin);
        if (worse) {
            s.worst_margin = rep.margin;
            s.worst_params = rep.params;
            first = false;
        }
    }
};

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        if (__builtin_popcount(m) != k) continue;
        std::vector<int> v;
        for (int i = 0; i < n; ++i)
            if ((m >> i) & 1) v.push_back(i);
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<CatalogSummary> run_catalog(const Rect& r, double beta, const TauFunction& tau, const CatalogOptions& opt) {
    const int len = 2 * (r.width() + r.height());
    TableCache tc(r);
    std::vector<CatalogSummary> out;
    if (opt.identity) {
        Tally t;
        t.s.check = "duality_identity";
        for (std::uint32_t m = 0; m < (1u << len); ++m) {
            std::vector<int> v(len);
            for (int k = 0; k < len; ++k) v[k] = ((m >> k) & 1) ? -1 : 1;
            t.add(duality_identity_check(BoundaryCondition::explicit_values(r, v), beta), false);
        }
        out.push_back(t.s);
    }
    if (opt.upper_bound) {
        Tally t;
        t.s.check = "weight_upper_bound";
        for (int i = 0; i < len; ++i)
            for (int j = i + 1; j < len; ++j) t.add(weight_upper_bound_check(r, beta, i, j, tau, &tc), true);
        out.push_back(t.s);
    }
    if (opt.bk) {
        Tally t;
        t.s.check = "bk_inequality";
        for (const auto& four : subsets_of_size(len, 4)) {
            // The three ways to split four positions into two pairs.
            const int a = four[0], b = four[1], c = four[2], d = four[3];
            for (const auto& split : {std::pair{std::vector{a, b}, std::vector{c, d}},
                                      std::pair{std::vector{a, c}, std::vector{b, d}},
                                      std::pair{std::vector{a, d}, std::vector{b, c}}})
                t.add(bk_inequality_check(r, beta, split.first, split.second, &tc), true);
        }
        out.push_back(t.s);
    }
    if (opt.factorization) {
        Tally t;
        t.s.check = "factorization";
        for (int k = 2; k <= len; k += 2)
            for (const auto& ends : subsets_of_size(len, k)) {
                const FamilyTable& table = tc.get(ends);
                for (const auto& [key, e] : table.entries()) {
                    const int m = static_cast<int>(e.family.open_contours.size());
                    for (int p = 1; p < m; ++p) t.add(factorization_check(table.bc(), beta, e.family, p, &tc), false);
                }
            }
        out.push_back(t.s);
    }
    if (opt.marginal) {
        Tally t;
        t.s.check = "marginal";
        for (int k = 4; k <= len; k += 2)
            for (const auto& ends : subsets_of_size(len, k)) t.add(marginal_check(r, beta, ends, &tc), true);
        out.push_back(t.s);
    }
    if (opt.point_passing) {
        Tally t;
        t.s.check = "point_passing";
        const auto duals = dual_rect(r);
        for (int b = 0; b < len; ++b)
            for (int b2 = b + 1; b2 < len; ++b2)
                for (const DualSite& z : duals) t.add(point_passing_check(r, beta, b, b2, z, &tc), true);
        out.push_back(t.s);
    }
    return out;
}

nlohmann::json to_json(const CheckReport& r) {
    return {{"check", r.check}, {"params", r.params}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"passed", r.passed}};
}

nlohmann::json to_json(const CatalogSummary& s) {
    return {{"check", s.check}, {"cases", s.cases}, {"failures", s.failures}, {"worst_margin", s.worst_margin},
            {"worst_params", s.worst_params}};
}

}  // namespace ising
