#include "ising/tension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ising/boundary.hpp"
#include "ising/duality.hpp"
#include "ising/errors.hpp"
#include "ising/gibbs.hpp"
#include "ising/rng.hpp"
#include "ising/sampler.hpp"
#include "ising/stats.hpp"
#include "ising/transfer.hpp"

namespace ising {

namespace {

// Symmetric transfer matrix D H D of an infinite strip, D carrying half of
// the column energy.
class StripOperator {
public:
    StripOperator(int width, double k, int top, int bottom) : width_(width), k_(k) {
        const auto bonds = column_bond_energy(width);
        d_.resize(bonds.size());
        for (std::size_t s = 0; s < d_.size(); ++s) {
            const int s0 = (s & 1) ? -1 : 1;
            const int sw = ((s >> (width - 1)) & 1) ? -1 : 1;
            const double e = -bonds[s] + top * sw + bottom * s0;
            d_[s] = std::exp(0.5 * k * e);
        }
    }

    std::size_t states() const { return d_.size(); }

    void apply(std::vector<double>& v) const {
        for (std::size_t s = 0; s < v.size(); ++s) v[s] *= d_[s];
        mix_columns(v, width_, k_);
        for (std::size_t s = 0; s < v.size(); ++s) v[s] *= d_[s];
    }

    // Leading eigenpair by power iteration; v is normalised on return.
    double leading(std::vector<double>& v, int min_iter, int max_iter, double tol) const {
        v.assign(states(), 1.0);
        normalise(v);
        double lambda = 0.0;
        int stable = 0;
        std::vector<double> w;
        for (int it = 0; it < max_iter; ++it) {
            w = v;
            apply(w);
            double rq = 0;
            for (std::size_t s = 0; s < v.size(); ++s) rq += v[s] * w[s];
            normalise(w);
            v.swap(w);
            if (it >= min_iter && std::abs(rq - lambda) <= tol * rq) {
                if (++stable >= 5) return rq;
            } else {
                stable = 0;
            }
            lambda = rq;
        }
        return lambda;
    }

    static void normalise(std::vector<double>& v) {
        double n = 0;
        for (double a : v) n += a * a;
        n = std::sqrt(n);
        for (double& a : v) a /= n;
    }

private:
    int width_;
    double k_;
    std::vector<double> d_;
};

double spin_of(std::size_t s, int row) { return ((s >> row) & 1) ? -1.0 : 1.0; }

struct LinearFit {
    double a = 0, rss = 0;
};

// a + b/(W+d)^2, best d on a grid, linear in (a, b).
LinearFit fit_inverse_square(const std::vector<double>& w, const std::vector<double>& t) {
    LinearFit best{0, std::numeric_limits<double>::infinity()};
    for (double d = -4.0; d <= 8.0 + 1e-9; d += 0.01) {
        std::vector<std::vector<double>> rows;
        for (double x : w) rows.push_back({1.0, 1.0 / ((x + d) * (x + d))});
        const auto c = least_squares(rows, t);
        double rss = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double r = t[i] - c[0] - c[1] / ((w[i] + d) * (w[i] + d));
            rss += r * r;
        }
        if (rss < best.rss) best = {c[0], rss};
    }
    return best;
}

int profile_length(int p, int q) {
    if (p == 1 && q == 0) return 16;
    if (p == 2 && q == 1) return 8;
    if (p == 1 && q == 1) return 10;
    if (p == 3 && q == 1) return 6;
    if (p == 3 && q == 2) return 5;
    if (p == 4 && q == 1) return 4;
    return std::max(3, 16 / std::max(p, q));
}

}  // namespace

double strip_log_lambda(int width, double k, int top, int bottom) {
    const StripOperator op(width, k, top, bottom);
    std::vector<double> v;
    return std::log(op.leading(v, 50, 50000, 1e-15));
}

SurfaceTensionEstimate tau_box(double beta, int n) {
    const Rect r = BoxSpec{n}.rect();
    const double lz_d = TransferMatrix(BoundaryCondition::dobrushin(r), beta).log_partition();
    const double lz_p = TransferMatrix(BoundaryCondition::plus(r), beta).log_partition();
    return {0.0, -(lz_d - lz_p) / (2 * n + 1), n, 0.0};
}

SurfaceTensionEstimate tau_axis(double beta, int max_width) {
    if (beta < 0) throw DomainError("beta must be nonnegative");
    if (max_width > kTransferWidthCap) throw WidthExceeded("strip width exceeds 12");
    if (max_width < 9) throw DomainError("tau_axis needs strip widths up to at least 9");
    std::vector<double> ws, ts;
    for (int w = 5; w <= max_width; ++w) {
        ws.push_back(w);
        ts.push_back(strip_log_lambda(w, beta, 1, 1) - strip_log_lambda(w, beta, 1, -1));
    }
    auto window = [&](int lo, int hi) {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < ws.size(); ++i)
            if (ws[i] >= lo && ws[i] <= hi) a.push_back(ws[i]), b.push_back(ts[i]);
        return fit_inverse_square(a, b).a;
    };
    const double main = window(6, max_width);
    double lo = main, hi = main;
    for (const auto& [a, b] : {std::pair{5, max_width}, std::pair{7, max_width}, std::pair{6, max_width - 1}}) {
        const double v = window(a, b);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    SurfaceTensionEstimate est{0.0, main, max_width, hi - lo};
    if (!std::isfinite(main) || main < 0) {
        est.value = std::max(0.0, ts.back());
        est.error = ts.back();
    }
    return est;
}

DecayProfile dual_decay_profile(double beta, int p, int q, int width) {
    if (!(beta > 0)) throw DomainError("tau_direction needs beta > 0");
    if (p < 0 || q < 0 || (p == 0 && q == 0)) throw DomainError("direction must be a nonzero vector in the first quadrant");
    // Column steps along the strip must be the larger component.
    if (q > p) std::swap(p, q);
    const int kmax = profile_length(p, q);
    if (q * kmax > width - 2) throw DomainError("strip too narrow for this direction");
    const double ks = dual_beta(beta);
    const StripOperator op(width, ks, 0, 0);
    std::vector<double> v;
    const double lambda = op.leading(v, 80, 80, 0.0);
    const int y1 = (width - 1 - q * kmax) / 2;
    std::vector<double> w(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) w[s] = spin_of(s, y1) * v[s];
    DecayProfile prof;
    const double step = std::hypot(p, q);
    for (int c = 1; c <= p * kmax; ++c) {
        op.apply(w);
        for (double& a : w) a /= lambda;
        if (c % p) continue;
        const int k = c / p, y2 = y1 + q * k;
        double corr = 0;
        for (std::size_t s = 0; s < v.size(); ++s) corr += v[s] * spin_of(s, y2) * w[s];
        if (!(corr > 0)) break;
        prof.r.push_back(k * step);
        prof.log_g.push_back(std::log(corr));
    }
    return prof;
}

SurfaceTensionEstimate tau_direction(double beta, int p, int q, int width) {
    const DecayProfile prof = dual_decay_profile(beta, p, q, width);
    if (q > p) std::swap(p, q);
    auto fit = [&](double rmin) {
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (std::size_t i = 0; i < prof.r.size(); ++i) {
            const double r = prof.r[i];
            if (r >= rmin) rows.push_back({-r, 1.0, 1.0 / r}), y.push_back(prof.log_g[i] + 0.5 * std::log(r));
        }
        if (rows.size() < 3) throw SignalBelowNoise("too few correlation points for the decay fit");
        return least_squares(rows, y)[0];
    };
    const double all = fit(0.0), tail = fit(3.0);
    return {std::atan2(static_cast<double>(q), static_cast<double>(p)), all, width, std::abs(all - tail)};
}

std::vector<std::pair<int, int>> tension_directions() { return {{1, 0}, {4, 1}, {3, 1}, {2, 1}, {3, 2}, {1, 1}}; }

std::vector<SurfaceTensionEstimate> tau_grid(double beta, int width) {
    const auto dirs = tension_directions();
    std::vector<SurfaceTensionEstimate> out(dirs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < dirs.size(); ++i) out[i] = tau_direction(beta, dirs[i].first, dirs[i].second, width);
    return out;
}

double fold_angle(double theta) {
    const double quarter = 0.5 * std::numbers::pi;
    double t = std::fmod(std::abs(theta), quarter);
    if (t > 0.5 * quarter) t = quarter - t;
    return t;
}

TensionModel TensionModel::fit(const std::vector<SurfaceTensionEstimate>& grid, int terms, double shift_by_error) {
    if (terms < 1 || terms > static_cast<int>(grid.size())) throw DomainError("bad number of cosine terms");
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (const auto& e : grid) {
        const double t = fold_angle(e.theta);
        std::vector<double> row;
        for (int k = 0; k < terms; ++k) row.push_back(std::cos(4.0 * k * t));
        rows.push_back(row);
        y.push_back(e.value + shift_by_error * e.error);
    }
    return TensionModel(least_squares(rows, y));
}

double TensionModel::operator()(double theta) const {
    const double t = fold_angle(theta);
    double s = 0;
    for (std::size_t k = 0; k < a_.size(); ++k) s += a_[k] * std::cos(4.0 * static_cast<double>(k) * t);
    return s;
}

double TensionModel::of_vector(double dx, double dy) const {
    const double n = std::hypot(dx, dy);
    if (n == 0) return 0.0;
    return n * (*this)(std::atan2(dy, dx));
}

STIReport sti_scan(const TensionModel& model, long long samples, std::uint64_t seed) {
    std::vector<std::pair<int, int>> vecs;
    for (int a = -20; a <= 20; ++a)
        for (int b = -20; b <= 20; ++b)
            if (a * a + b * b > 0 && a * a + b * b <= 400) vecs.push_back({a, b});
    const CounterRng rng(seed, 0);
    STIReport rep;
    rep.kappa_hat = std::numeric_limits<double>::infinity();
    std::uint64_t counter = 0;
    while (rep.samples < samples) {
        const auto x = vecs[rng.bits(counter++) % vecs.size()];
        const auto y = vecs[rng.bits(counter++) % vecs.size()];
        if (x.first * y.second - x.second * y.first == 0) continue;  // collinear
        const int sx = x.first + y.first, sy = x.second + y.second;
        const double den = std::hypot(x.first, x.second) + std::hypot(y.first, y.second) - std::hypot(sx, sy);
        const double num = model.of_vector(x.first, x.second) + model.of_vector(y.first, y.second) - model.of_vector(sx, sy);
        const double ratio = num / den;
        ++rep.samples;
        if (ratio < rep.kappa_hat) {
            rep.kappa_hat = ratio;
            rep.worst_x = x;
            rep.worst_y = y;
        }
    }
    return rep;
}

STIReport sti_scan(const std::vector<SurfaceTensionEstimate>& grid, long long samples, std::uint64_t seed) {
    STIReport rep = sti_scan(TensionModel::fit(grid, 4), samples, seed);
    double err = 0;
    for (const auto& alt : {TensionModel::fit(grid, 3), TensionModel::fit(grid, 5), TensionModel::fit(grid, 4, 1.0),
                            TensionModel::fit(grid, 4, -1.0)})
        err = std::max(err, std::abs(sti_scan(alt, samples, seed).kappa_hat - rep.kappa_hat));
    rep.kappa_error = err;
    return rep;
}

RelaxationFit relaxation_rate(double beta, const LocalFunction& f, const std::vector<int>& n_list, long long sweeps,
                              std::uint64_t seed) {
    if (n_list.size() < 3) throw DomainError("relaxation fit needs at least three box sizes");
    std::vector<int> ns = n_list;
    std::sort(ns.begin(), ns.end());
    std::vector<double> val(ns.size()), err(ns.size(), 0.0);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const Rect r = BoxSpec{ns[i]}.rect();
        const auto bc = BoundaryCondition::plus(r);
        if (ns[i] <= 8) {
            val[i] = expectation_transfer(bc, beta, f, 2 * 8 + 1);
        } else {
            ChainSpec spec;
            spec.bc = bc;
            spec.beta = beta;
            spec.seed = seed;
            spec.replica = static_cast<std::uint64_t>(ns[i]);
            spec.burn_in = default_burn_in(bc);
            spec.sweeps = sweeps;
            const auto st = run_chain(spec, {Observable::local(f)});
            val[i] = st[0].mean;
            err[i] = st[0].std_error;
        }
    }
    RelaxationFit fit;
    std::vector<double> x, y, sig;
    const double ref = val.back(), ref_err = err.back();
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
        const double d = std::abs(val[i] - ref);
        const double noise = std::max(kRelaxationNoiseFloor, 2.0 * std::hypot(err[i], ref_err));
        if (d <= noise) continue;
        fit.n_used.push_back(ns[i]);
        fit.differences.push_back(d);
        x.push_back(ns[i]);
        y.push_back(std::log(d));
        const double e = std::hypot(err[i], ref_err);
        sig.push_back(e > 0 ? e / d : 0.0);
    }
    if (x.size() < 2) throw SignalBelowNoise("differences do not rise above the noise floor");
    const bool weighted = std::all_of(sig.begin(), sig.end(), [](double s) { return s > 0; });
    const LineFit lf = fit_line(x, y, weighted ? sig : std::vector<double>{});
    fit.slope = lf.slope;
    fit.slope_error = lf.slope_error;
    return fit;
}

}  // namespace ising
