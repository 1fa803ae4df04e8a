#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ising/spins.hpp"

namespace ising {

struct SurfaceTensionEstimate {
    double theta = 0.0;  // direction of the interface normal
    double value = 0.0;  // per unit length
    int n_used = 0;      // box half-size or strip width
    double error = 0.0;
};

// log of the largest eigenvalue of the symmetric column transfer matrix of an
// infinite strip of `width` rows at coupling k; top/bottom are the spins of
// the rows above and below (0 for a free edge).
double strip_log_lambda(int width, double k, int top, int bottom);

// Literal finite-box ratio -(2N+1)^-1 log(Z^dobrushin / Z^+) on Lambda_N.
SurfaceTensionEstimate tau_box(double beta, int n);

// Horizontal-interface tension from strip interface free energies
// log lambda(+,+) - log lambda(+,-), widths 6..max_width, extrapolated in
// 1/(W+d)^2. Error is the spread over fit windows.
SurfaceTensionEstimate tau_axis(double beta, int max_width = 12);

// Dual two-point function <s_0 s_{k(p,q)}> on a free strip of `width` rows
// at the dual temperature of beta, k = 1, 2, ...; r is the Euclidean
// distance. Stops at the first nonpositive value.
struct DecayProfile {
    std::vector<double> r;
    std::vector<double> log_g;
};
DecayProfile dual_decay_profile(double beta, int p, int q, int width = 20);

// Tension in the lattice direction (p, q) from the decay rate of the dual
// two-point function on a free strip at the dual temperature.
SurfaceTensionEstimate tau_direction(double beta, int p, int q, int width = 20);

// The six rational directions (1,0), (4,1), (3,1), (2,1), (3,2), (1,1).
std::vector<std::pair<int, int>> tension_directions();
std::vector<SurfaceTensionEstimate> tau_grid(double beta, int width = 20);

// Fold an angle into [0, pi/4] using the square-lattice symmetries.
double fold_angle(double theta);

// tau(theta) = sum_k a_k cos(4 k theta), fitted by least squares.
class TensionModel {
public:
    TensionModel() = default;
    explicit TensionModel(std::vector<double> coeffs) : a_(std::move(coeffs)) {}
    static TensionModel fit(const std::vector<SurfaceTensionEstimate>& grid, int terms, double shift_by_error = 0.0);

    double operator()(double theta) const;
    // Homogeneous extension |x| tau(x / |x|).
    double of_vector(double dx, double dy) const;
    const std::vector<double>& coefficients() const { return a_; }

private:
    std::vector<double> a_;
};

struct STIReport {
    double kappa_hat = 0.0;
    double kappa_error = 0.0;
    std::pair<int, int> worst_x{0, 0};
    std::pair<int, int> worst_y{0, 0};
    long long samples = 0;
};

// Minimum of (tau(x)+tau(y)-tau(x+y)) / (|x|+|y|-|x+y|) over sampled
// non-collinear integer pairs with |x|, |y| <= 20.
STIReport sti_scan(const TensionModel& model, long long samples, std::uint64_t seed);
// Scan with the model from tau_grid; the error is the largest change of
// kappa_hat over alternative models (other term counts, error envelopes).
STIReport sti_scan(const std::vector<SurfaceTensionEstimate>& grid, long long samples, std::uint64_t seed);

struct RelaxationFit {
    double slope = 0.0;
    double slope_error = 0.0;
    std::vector<int> n_used;
    std::vector<double> differences;
};

// Slope of log|<f>^+_n - <f>^+_ref| against n, the reference being the
// largest n. Exact transfer matrix for n <= 8; larger n are sampled with
// `sweeps` sweeps. Throws SignalBelowNoise when fewer than two differences
// rise above the noise floor.
RelaxationFit relaxation_rate(double beta, const LocalFunction& f, const std::vector<int>& n_list,
                              long long sweeps = 200000, std::uint64_t seed = 1);

inline constexpr double kRelaxationNoiseFloor = 1e-13;

}  // namespace ising
