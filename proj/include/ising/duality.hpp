#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ising/boundary.hpp"
#include "ising/contour.hpp"
#include "ising/lattice.hpp"

namespace ising {

// tanh(beta*) = exp(-2 beta).
double dual_beta(double beta);

// <prod sigma_b> on the free dual lattice of r (the (w+1) x (h+1) dual
// vertices) with weight exp(+beta_star sum sigma sigma). Repeated sites
// cancel in pairs.
double dual_correlation(const Rect& r, double beta_star, const std::vector<DualSite>& sites);
double dual_correlation(const BoxSpec& box, double beta_star, const std::vector<DualSite>& sites);

// Configurations of a boundary condition grouped by their open-contour
// family, with a histogram of the number of unequal bonds. The random-line
// weight of a family is
//   q(family) = sum_sigma exp(-2 beta |E(sigma)|) / sum_sigma' exp(-2 beta |E+(sigma')|),
// the denominator running over the plus boundary condition.
class FamilyTable {
public:
    struct Entry {
        ContourFamily family;  // open contours only
        std::vector<std::uint64_t> counts;  // counts[|E|]
    };

    explicit FamilyTable(const BoundaryCondition& bc);

    const BoundaryCondition& bc() const { return bc_; }
    const std::map<std::string, Entry>& entries() const { return entries_; }
    double weight(const std::string& key, double beta) const;
    double weight(const Entry& e, double beta) const;
    double total(double beta) const;
    // sum over the plus condition, the common normalisation.
    double plus_sum(double beta) const;

private:
    BoundaryCondition bc_;
    std::map<std::string, Entry> entries_;
    std::vector<std::uint64_t> plus_counts_;
};

// Tables keyed by the endpoint set (q does not change under a global flip).
class TableCache {
public:
    explicit TableCache(Rect r) : rect_(r) {}
    const FamilyTable& get(const std::vector<int>& ring_positions);
    const Rect& rect() const { return rect_; }

private:
    Rect rect_;
    std::map<std::vector<int>, std::unique_ptr<FamilyTable>> tables_;
};

struct CheckReport {
    std::string check;
    nlohmann::json params;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs for inequalities, discrepancy for identities
    bool passed = false;
};

inline constexpr double kIdentityTolerance = 1e-10;

// Z^omega/Z^+ against the summed q-weights and the dual correlation of b(omega).
// lhs = partition ratio, rhs = dual correlation, margin = max pairwise
// relative discrepancy of the three members.
CheckReport duality_identity_check(const BoundaryCondition& bc, double beta);

// tau(dx, dy): surface tension times length for the displacement (dx, dy).
using TauFunction = std::function<double(double, double)>;

// exp(-tau(j - i)) - sum of q over single contours from ring position i to j.
CheckReport weight_upper_bound_check(const Rect& r, double beta, int i, int j, const TauFunction& tau,
                                     TableCache* cache = nullptr);

// (sum q over b1 families)(sum q over b2 families) - sum over joint families
// whose matching pairs b1 within b1 and b2 within b2.
CheckReport bk_inequality_check(const Rect& r, double beta, const std::vector<int>& b1, const std::vector<int>& b2,
                                TableCache* cache = nullptr);

// Removed bonds and determined spins of a prefix of open contours.
struct ReducedDomain {
    std::vector<std::pair<Site, Site>> removed_bonds;
    std::vector<bool> flips;  // removed bond crosses a prefix edge
    std::map<Site, int> determined;  // interior sites reached from the boundary
};

// Flood fill from the boundary layer through the removed bonds of the
// prefix, with a sign flip across prefix edges. Throws IncompatibleFamily on
// a sign conflict or when the prefix endpoints are not sign changes of bc.
ReducedDomain reduced_domain(const BoundaryCondition& bc, const std::vector<Contour>& prefix);

// q-weights of the families of bc_rest in the box with the prefix's removed
// bonds kept unbroken, keyed by family.
std::map<std::string, double> reduced_weights(const Rect& r, const std::vector<Contour>& prefix,
                                              const BoundaryCondition& bc_rest, double beta);

// q(G_1..G_m) against q(G_1..G_k) q_{Lambda'}(G_{k+1}..G_m); margin is the
// relative discrepancy.
CheckReport factorization_check(const BoundaryCondition& bc, double beta, const ContourFamily& family, int k,
                                TableCache* cache = nullptr);

// For every family of the condition with the given endpoints and every pair
// of its contours: sum of q over families containing both <= q of the pair
// alone. Reports the worst margin.
CheckReport marginal_check(const Rect& r, double beta, const std::vector<int>& endpoints, TableCache* cache = nullptr);

// sum of q over contours b -> z -> b' <= <s_b s_z>* <s_z s_b'>*.
CheckReport point_passing_check(const Rect& r, double beta, int b, int b2, DualSite z, TableCache* cache = nullptr);

struct CatalogSummary {
    std::string check;
    long long cases = 0;
    long long failures = 0;
    double worst_margin = 0.0;
    nlohmann::json worst_params;
};

struct CatalogOptions {
    bool identity = true;
    bool upper_bound = true;
    bool bk = true;
    bool factorization = true;
    bool marginal = true;
    bool point_passing = true;
};

// Runs every check over all boundary conditions of r (by endpoint set) that
// the check applies to.
std::vector<CatalogSummary> run_catalog(const Rect& r, double beta, const TauFunction& tau,
                                        const CatalogOptions& opt = {});

nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const CatalogSummary& s);

}  // namespace ising
