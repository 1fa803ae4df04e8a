#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ising/duality.hpp"
#include "ising/gibbs.hpp"
#include "ising/tension.hpp"
#include "support.hpp"

using namespace ising;
using testing::golden;

TEST_CASE("dual temperature") {
    CHECK(dual_beta(0.6) == doctest::Approx(golden("duality.beta_star_b06")).epsilon(1e-12));
    for (double b : {0.1, 0.44, 0.9}) CHECK(dual_beta(dual_beta(b)) == doctest::Approx(b).epsilon(1e-12));
    CHECK(dual_beta(self_dual_beta()) == doctest::Approx(self_dual_beta()).epsilon(1e-12));
}

TEST_CASE("dual correlation on the smallest box") {
    const double v = dual_correlation(BoxSpec{0}, 0.31, {DualSite{-1, -1}, DualSite{1, -1}});
    CHECK(v == doctest::Approx(golden("duality.pair_n0_bs031")).epsilon(1e-12));
    CHECK(dual_correlation(BoxSpec{0}, 0.31, {}) == doctest::Approx(1.0));
}

TEST_CASE("partition ratio identity") {
    const auto rep = duality_identity_check(BoundaryCondition::dobrushin(BoxSpec{1}.rect()), 0.6);
    CHECK(rep.passed);
    CHECK(rep.lhs == doctest::Approx(golden("duality.ratio_n1_b06_dobrushin")).epsilon(1e-10));
    for (double beta : {0.3, 1.0}) {
        const Rect r = BoxSpec{1}.rect();
        for (const auto& bc : {BoundaryCondition::quadrant(r), BoundaryCondition::bernoulli(r, 0.5, 8)}) {
            const auto c = duality_identity_check(bc, beta);
            CHECK(c.passed);
            CHECK(c.margin <= kIdentityTolerance);
        }
    }
}

TEST_CASE("catalog on the smallest box") {
    const double beta = 0.6;
    const double t = golden("tension.axis_b06");
    const TauFunction tau = [t](double dx, double dy) { return t * std::max(std::abs(dx), std::abs(dy)); };
    const auto rows = run_catalog(BoxSpec{0}.rect(), beta, tau);
    CHECK(rows.size() == 6);
    for (const auto& s : rows) {
        INFO(s.check);
        CHECK(s.cases > 0);
        CHECK(s.failures == 0);
    }
}

TEST_CASE("family table total equals the partition ratio") {
    const auto bc = BoundaryCondition::dobrushin(BoxSpec{1}.rect());
    const FamilyTable table(bc);
    const double lz = log_partition_function(make_oracle(bc, 0.6));
    const double lzp = log_partition_function(make_oracle(BoundaryCondition::plus(bc.rect()), 0.6));
    CHECK(table.total(0.6) == doctest::Approx(std::exp(lz - lzp)).epsilon(1e-10));
}
