#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ising/boundary.hpp"
#include "ising/contour.hpp"
#include "ising/tension.hpp"

namespace ising {

// plus | minus | dobrushin | quadrant | bernoulli:p:seed | file:PATH
BoundaryCondition parse_bc(const std::string& spec, const Rect& r);

// Boundary-condition file: JSON list of [x, y, +-1] covering the boundary
// layer of r exactly once.
BoundaryCondition read_bc_file(const std::string& path, const Rect& r);
BoundaryCondition bc_from_json(const nlohmann::json& j, const Rect& r);
nlohmann::json bc_to_json(const BoundaryCondition& bc);
void write_bc_file(const BoundaryCondition& bc, const std::string& path);

nlohmann::json family_to_json(const ContourFamily& f);
ContourFamily family_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Looks up a dotted key ("gibbs.z_n1_b06_plus") in the golden values file.
double golden_value(const nlohmann::json& golden, const std::string& dotted_key);

nlohmann::json grid_to_json(const std::vector<SurfaceTensionEstimate>& grid);
std::vector<SurfaceTensionEstimate> grid_from_json(const nlohmann::json& j);
// tau_grid(beta) cached as JSON in `cache_dir` (no caching when empty).
std::vector<SurfaceTensionEstimate> cached_tau_grid(double beta, const std::string& cache_dir);

}  // namespace ising
