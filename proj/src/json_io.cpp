#include "ising/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ising/errors.hpp"

namespace ising {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

nlohmann::json dual_to_json(DualSite d) { return {d.x2, d.y2}; }
DualSite dual_from_json(const nlohmann::json& j) { return DualSite{j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace

BoundaryCondition parse_bc(const std::string& spec, const Rect& r) {
    if (spec == "plus") return BoundaryCondition::plus(r);
    if (spec == "minus") return BoundaryCondition::minus(r);
    if (spec == "dobrushin") return BoundaryCondition::dobrushin(r);
    if (spec == "quadrant") return BoundaryCondition::quadrant(r);
    if (spec.rfind("file:", 0) == 0) return read_bc_file(spec.substr(5), r);
    if (spec.rfind("bernoulli", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw DomainError("expected bernoulli:p:seed, got '" + spec + "'");
        double p = 0;
        unsigned long long seed = 0;
        try {
            p = std::stod(parts[1]);
            seed = std::stoull(parts[2]);
        } catch (const std::exception&) {
            throw DomainError("bad bernoulli parameters in '" + spec + "'");
        }
        if (!(p >= 0 && p <= 1)) throw DomainError("bernoulli p must lie in [0,1]");
        return BoundaryCondition::bernoulli(r, p, seed);
    }
    throw DomainError("unknown boundary condition '" + spec + "'");
}

BoundaryCondition bc_from_json(const nlohmann::json& j, const Rect& r) {
    if (!j.is_array()) throw DomainError("boundary file must hold a JSON list");
    const auto layer = boundary_layer(r);
    std::vector<int> values(layer.size(), 0);
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3) throw DomainError("boundary entries must be [x, y, s]");
        const Site s{e[0].get<int>(), e[1].get<int>()};
        const int v = e[2].get<int>();
        if (v != 1 && v != -1) throw DomainError("boundary spins must be +1 or -1");
        const int k = boundary_layer_index(r, s);
        if (k < 0) throw SupportOutOfBox("site is not on the boundary layer");
        if (values[k] != 0) throw DomainError("boundary site listed twice");
        values[k] = v;
    }
    for (int v : values)
        if (v == 0) throw DomainError("boundary file does not cover the boundary layer");
    return BoundaryCondition::explicit_values(r, std::move(values));
}

BoundaryCondition read_bc_file(const std::string& path, const Rect& r) { return bc_from_json(read_json_file(path), r); }

nlohmann::json bc_to_json(const BoundaryCondition& bc) {
    nlohmann::json j = nlohmann::json::array();
    const auto layer = boundary_layer(bc.rect());
    for (std::size_t k = 0; k < layer.size(); ++k) j.push_back({layer[k].x, layer[k].y, bc.values()[k]});
    return j;
}

void write_bc_file(const BoundaryCondition& bc, const std::string& path) { write_text_file(path, bc_to_json(bc).dump() + "\n"); }

nlohmann::json family_to_json(const ContourFamily& f) {
    auto contours = [](const std::vector<Contour>& cs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : cs) {
            nlohmann::json v = nlohmann::json::array();
            for (const auto& d : c.vertices) v.push_back(dual_to_json(d));
            a.push_back(v);
        }
        return a;
    };
    nlohmann::json m = nlohmann::json::array();
    for (const auto& [a, b] : f.matching) m.push_back({a, b});
    return {{"rect", {f.rect.x0, f.rect.x1, f.rect.y0, f.rect.y1}},
            {"open", contours(f.open_contours)},
            {"closed", contours(f.closed_contours)},
            {"matching", m}};
}

ContourFamily family_from_json(const nlohmann::json& j) {
    ContourFamily f;
    const auto& r = j.at("rect");
    f.rect = Rect{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<int>(), r.at(3).get<int>()};
    auto contours = [](const nlohmann::json& a, bool closed) {
        std::vector<Contour> out;
        for (const auto& c : a) {
            Contour g;
            g.closed = closed;
            for (const auto& d : c) g.vertices.push_back(dual_from_json(d));
            out.push_back(std::move(g));
        }
        return out;
    };
    f.open_contours = contours(j.at("open"), false);
    f.closed_contours = contours(j.at("closed"), true);
    for (const auto& p : j.at("matching")) f.matching.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    return f;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

double golden_value(const nlohmann::json& golden, const std::string& dotted_key) {
    const nlohmann::json* cur = &golden;
    for (const auto& part : split(dotted_key, '.')) {
        if (!cur->is_object() || !cur->contains(part)) throw DomainError("golden key missing: " + dotted_key);
        cur = &(*cur)[part];
    }
    if (cur->is_object() && cur->contains("value")) cur = &(*cur)["value"];
    return cur->get<double>();
}

nlohmann::json grid_to_json(const std::vector<SurfaceTensionEstimate>& grid) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& e : grid) a.push_back({{"theta", e.theta}, {"value", e.value}, {"n_used", e.n_used}, {"error", e.error}});
    return a;
}

std::vector<SurfaceTensionEstimate> grid_from_json(const nlohmann::json& j) {
    std::vector<SurfaceTensionEstimate> g;
    for (const auto& e : j)
        g.push_back({e.at("theta").get<double>(), e.at("value").get<double>(), e.at("n_used").get<int>(),
                     e.at("error").get<double>()});
    return g;
}

std::vector<SurfaceTensionEstimate> cached_tau_grid(double beta, const std::string& cache_dir) {
    if (cache_dir.empty()) return tau_grid(beta);
    char name[64];
    std::snprintf(name, sizeof name, "tau_grid_%.6f.json", beta);
    const std::string path = (std::filesystem::path(cache_dir) / name).string();
    if (std::filesystem::exists(path)) return grid_from_json(read_json_file(path));
    auto grid = tau_grid(beta);
    write_text_file(path, grid_to_json(grid).dump() + "\n");
    return grid;
}

}  // namespace ising
