#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "ising/errors.hpp"
#include "ising/gibbs.hpp"
#include "ising/tension.hpp"
#include "support.hpp"

using namespace ising;
using testing::golden;

TEST_CASE("axis tension") {
    for (const char* b : {"06", "08", "045"}) {
        const double beta = std::stod(std::string("0.") + (b + 1));
        const auto est = tau_axis(beta);
        INFO(beta);
        CHECK(est.value == doctest::Approx(golden(std::string("tension.axis_b") + b)).epsilon(0.05));
    }
    CHECK(tau_axis(0.3).value < 0.02);
}

TEST_CASE("directional tension against the exact support function") {
    for (double beta : {0.6, 0.8}) {
        const auto grid = tau_grid(beta);
        REQUIRE(grid.size() == tension_directions().size());
        const std::string key = beta == 0.6 ? "06" : "08";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto [p, q] = tension_directions()[i];
            INFO(beta << " (" << p << "," << q << ")");
            CHECK(grid[i].theta == doctest::Approx(std::atan2(q, p)));
            CHECK(grid[i].value ==
                  doctest::Approx(golden("tension.dir_b" + key + "_" + std::to_string(p) + "_" + std::to_string(q)))
                      .epsilon(0.02));
        }
        const auto sti = sti_scan(grid, 20000, 1);
        const double kappa = golden("tension.kappa_b" + key);
        CHECK(sti.kappa_hat > 3 * sti.kappa_error);
        CHECK(sti.kappa_hat == doctest::Approx(kappa).epsilon(0.15));
    }
}

TEST_CASE("fold angle and the cosine model") {
    const double q = std::numbers::pi / 2;
    CHECK(fold_angle(0.1) == doctest::Approx(0.1));
    CHECK(fold_angle(q - 0.1) == doctest::Approx(0.1));
    CHECK(fold_angle(-0.1) == doctest::Approx(0.1));
    CHECK(fold_angle(3 * q + 0.2) == doctest::Approx(0.2));
    const TensionModel m({1.0, 0.1});
    CHECK(m(0.0) == doctest::Approx(1.1));
    CHECK(m(q / 2) == doctest::Approx(0.9));
    CHECK(m.of_vector(0, 3) == doctest::Approx(3.3));
    CHECK(m.of_vector(0, 0) == 0.0);
    // A constant tension is a Euclidean norm: strict triangle inequality with kappa = 1.
    CHECK(sti_scan(TensionModel({1.0}), 5000, 2).kappa_hat == doctest::Approx(1.0));
}

TEST_CASE("relaxation to the pure phase") {
    const auto f = LocalFunction::spin({0, 0});
    const auto fit = relaxation_rate(1.0, f, {1, 2, 3, 4});
    CHECK(fit.slope < -0.1);
    CHECK(fit.n_used.size() >= 2);
    CHECK_THROWS_AS(relaxation_rate(0.0, f, {1, 2, 3}), SignalBelowNoise);
    CHECK_THROWS_AS(relaxation_rate(1.0, f, {1, 2}), DomainError);
}
