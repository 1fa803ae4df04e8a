#include "ising/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "ising/duality.hpp"
#include "ising/errors.hpp"
#include "ising/gibbs.hpp"
#include "ising/json_io.hpp"
#include "ising/tension.hpp"

#ifndef ISING_CODE_HASH
#define ISING_CODE_HASH "unknown"
#endif

namespace ising {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<ExperimentId, std::string>> kIds = {
    {ExperimentId::THM, "E-THM"},     {ExperimentId::OPT, "E-OPT"}, {ExperimentId::CROSS, "E-CROSS"},
    {ExperimentId::FLUCT, "E-FLUCT"}, {ExperimentId::RELAX, "E-RELAX"}, {ExperimentId::OZ, "E-OZ"},
    {ExperimentId::RANDBC, "E-RANDBC"}, {ExperimentId::DUAL, "E-DUAL"}};

ChainSpec make_chain(const ExperimentSpec& s, const BoundaryCondition& bc, int n, std::uint64_t seed,
                     std::uint64_t replica = 0) {
    ChainSpec c;
    c.bc = bc;
    c.beta = s.beta;
    c.seed = seed;
    c.replica = replica;
    c.sweeps = sweeps_for(s, n);
    c.thin = s.thin;
    c.burn_in = std::max(default_burn_in(bc), c.sweeps / 20);
    return c;
}

// Independent chains: mean of means, errors added in quadrature.
SampleStats pool(const std::vector<SampleStats>& runs) {
    SampleStats p;
    const double k = static_cast<double>(runs.size());
    double e2 = 0;
    for (const auto& r : runs) {
        p.mean += r.mean / k;
        e2 += r.std_error * r.std_error;
        p.autocorr_estimate += r.autocorr_estimate / k;
        p.samples += r.samples;
        p.n_batches += r.n_batches;
    }
    p.std_error = std::sqrt(e2) / k;
    return p;
}

// Runs one chain per seed of the spec and pools every observable.
// `stream` separates cells that share a box size: with common random numbers
// the heat-bath chains of ordered boundary conditions coalesce.
std::vector<SampleStats> pooled_chains(const ExperimentSpec& s, const BoundaryCondition& bc, int n,
                                       const MultiObservable& obs, std::vector<ChainResult>* keep = nullptr,
                                       std::uint64_t stream = 0) {
    std::vector<std::vector<SampleStats>> per_obs(obs.names.size());
    for (std::uint64_t seed : s.seeds) {
        ChainResult res = run_chain_multi(make_chain(s, bc, n, seed, stream), obs);
        for (std::size_t k = 0; k < obs.names.size(); ++k) per_obs[k].push_back(res.stats[k]);
        if (keep) keep->push_back(std::move(res));
    }
    std::vector<SampleStats> out;
    for (const auto& v : per_obs) out.push_back(pool(v));
    return out;
}

// Each (n, bc) cell is independent; results land by index so the fold below
// is in spec order whatever the schedule.
template <class Row, class F>
std::vector<Row> run_cells(int cells, F&& body) {
    std::vector<Row> out(cells);
    std::vector<std::exception_ptr> errors(cells);
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < cells; ++i) {
        try {
            out[i] = body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

bool strictly_decreasing(const std::vector<double>& v, const std::vector<double>& err, double sigmas) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i] - v[i + 1] > sigmas * std::hypot(err[i], err[i + 1]))) return false;
    return true;
}

json fit_json(const std::vector<int>& n, const std::vector<double>& y, const std::vector<double>& e) {
    for (double v : y)
        if (!(v > 0)) return json{{"exponent", nullptr}, {"exponent_error", nullptr}};
    const LineFit f = fit_power(n, y, e);
    return json{{"exponent", f.slope}, {"exponent_error", f.slope_error}};
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::string to_string(ExperimentId id) {
    for (const auto& [k, s] : kIds)
        if (k == id) return s;
    return "E-THM";
}

ExperimentId experiment_id_from(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u.rfind("E-", 0) != 0) u = "E-" + u;
    for (const auto& [k, name] : kIds)
        if (name == u) return k;
    throw DomainError("unknown experiment '" + s + "'");
}

json to_json(const ExperimentSpec& s) {
    return json{{"id", to_string(s.id)},   {"n_list", s.n_list}, {"beta", s.beta},   {"xi", s.xi},
                {"a", s.a},                {"bcs", s.bcs},       {"seeds", s.seeds}, {"sweeps", s.sweeps},
                {"sweep_growth", s.sweep_growth}, {"thin", s.thin}, {"c1", s.c1},   {"draws", s.draws},
                {"output_path", s.output_path}};
}

ExperimentSpec spec_from_json(const json& j) {
    ExperimentSpec s = default_spec(experiment_id_from(j.at("id").get<std::string>()));
    if (j.contains("n_list")) s.n_list = j["n_list"].get<std::vector<int>>();
    if (j.contains("beta")) s.beta = j["beta"].get<double>();
    if (j.contains("xi")) s.xi = j["xi"].get<double>();
    if (j.contains("a")) s.a = j["a"].get<double>();
    if (j.contains("bcs")) s.bcs = j["bcs"].get<std::vector<std::string>>();
    if (j.contains("seeds")) s.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    if (j.contains("sweeps")) s.sweeps = j["sweeps"].get<long long>();
    if (j.contains("sweep_growth")) s.sweep_growth = j["sweep_growth"].get<double>();
    if (j.contains("thin")) s.thin = j["thin"].get<int>();
    if (j.contains("c1")) s.c1 = j["c1"].get<double>();
    if (j.contains("draws")) s.draws = j["draws"].get<int>();
    if (j.contains("output_path")) s.output_path = j["output_path"].get<std::string>();
    return s;
}

void validate(const ExperimentSpec& s) {
    if (s.n_list.empty()) throw DomainError("n_list is empty");
    for (int n : s.n_list)
        if (n < 0) throw DomainError("box sizes must be nonnegative");
    if (s.seeds.empty()) throw DomainError("at least one seed is required");
    if (s.sweeps < 1 || s.thin < 1) throw DomainError("sweeps and thin must be positive");
    if (s.beta < 0) throw DomainError("beta must be nonnegative");
    const bool sampled = s.id != ExperimentId::OZ && s.id != ExperimentId::DUAL;
    if (sampled && (s.xi < 0 || s.xi >= 0.5)) throw DomainError("xi must lie in [0, 1/2)");
    if (s.id == ExperimentId::CROSS && !(s.a > std::max(2 * s.xi, 0.75) && s.a < 1))
        throw DomainError("a must satisfy max(2 xi, 3/4) < a < 1");
    const bool needs_bc = s.id == ExperimentId::THM || s.id == ExperimentId::CROSS || s.id == ExperimentId::DUAL;
    if (needs_bc && s.bcs.empty()) throw DomainError("no boundary conditions given");
    if (s.id == ExperimentId::OPT)
        for (int n : s.n_list)
            if (std::floor(s.c1 * std::sqrt(n)) > n || n < 1) throw DomainError("column half-height exceeds the box");
    if (s.id == ExperimentId::RANDBC) {
        if (s.beta < 0.8) throw DomainError("E-RANDBC needs beta >= 0.8");
        if (s.draws < 1) throw DomainError("draws must be positive");
    }
    if (s.id == ExperimentId::RELAX && s.n_list.size() < 3) throw DomainError("E-RELAX needs three box sizes");
    if (s.id == ExperimentId::OZ)
        for (int w : s.n_list)
            if (w < 8) throw DomainError("E-OZ strip widths must be at least 8");
}

long long sweeps_for(const ExperimentSpec& s, int n) {
    const int n0 = std::max(1, s.n_list.empty() ? n : s.n_list.front());
    const double f = std::pow(static_cast<double>(std::max(n, 1)) / n0, s.sweep_growth);
    return std::max(1LL, std::llround(static_cast<double>(s.sweeps) * f));
}

ExperimentSpec default_spec(ExperimentId id) {
    ExperimentSpec s;
    s.id = id;
    switch (id) {
        case ExperimentId::THM:
            s.n_list = {16, 32, 64};
            s.beta = 0.7;
            s.xi = 0.05;
            s.bcs = {"plus", "dobrushin", "quadrant"};
            s.sweeps = 400000;
            s.sweep_growth = 2.0;
            s.thin = 20;
            break;
        case ExperimentId::OPT:
            s.n_list = {16, 32, 64};
            s.beta = 0.7;
            s.bcs = {"dobrushin"};
            s.sweeps = 1000000;
            s.sweep_growth = 1.5;
            s.thin = 5;
            break;
        case ExperimentId::CROSS:
            s.n_list = {16, 32, 64};
            s.beta = 0.8;
            s.a = 0.8;
            s.bcs = {"quadrant"};
            s.sweeps = 1200000;
            s.sweep_growth = 5.0 / 3.0;
            s.thin = 20;
            break;
        case ExperimentId::FLUCT:
            s.n_list = {16, 32, 64, 128};
            s.beta = 0.7;
            s.xi = 0.0;
            s.bcs = {"dobrushin"};
            s.sweeps = 150000;
            s.sweep_growth = 2.0;
            s.thin = 40;
            break;
        case ExperimentId::RELAX:
            s.n_list = {1, 2, 3, 4, 5, 6, 7, 8};
            s.beta = 1.0;
            s.bcs = {"plus"};
            s.sweeps = 200000;
            break;
        case ExperimentId::OZ:
            s.n_list = {20};
            s.beta = 0.6;
            break;
        case ExperimentId::RANDBC:
            s.n_list = {16, 32};
            s.beta = 0.9;
            s.draws = 50;
            s.sweeps = 20000;
            s.sweep_growth = 2.0;
            s.thin = 10;
            break;
        case ExperimentId::DUAL:
            s.n_list = {0, 1};
            s.beta = 0.6;
            s.bcs = {"plus", "minus", "dobrushin", "quadrant", "bernoulli:0.5:1", "bernoulli:0.5:2"};
            break;
    }
    return s;
}

int core_radius(int n, double xi) { return static_cast<int>(std::floor(2.0 * std::pow(static_cast<double>(n), xi))); }

AlphaEstimate estimate_alpha(int n, double beta, const BoundaryCondition& bc, double xi, const ChainSpec& chain) {
    if (xi < 0 || xi >= 0.5) throw DomainError("xi must lie in [0, 1/2)");
    const BoxSpec core{core_radius(n, xi)};
    if (core.n >= n) throw DomainError("core box does not fit inside the box");
    ChainSpec c = chain;
    c.bc = bc;
    c.beta = beta;
    MultiObservable obs;
    obs.names = {"plus_circuit", "deficit"};
    obs.fn = [core](const SpinConfiguration& cfg, std::vector<double>& out) {
        const bool p = circuit_event(cfg, core, 1);
        out[0] = p;
        out[1] = !p && !circuit_event(cfg, core, -1);
    };
    const ChainResult res = run_chain_multi(c, obs);
    AlphaEstimate a;
    a.alpha_hat = std::clamp(res.stats[0].mean, 0.0, 1.0);
    a.std_error = res.stats[0].std_error;
    a.deficit = res.stats[1].mean;
    a.deficit_error = res.stats[1].std_error;
    a.n = n;
    a.bc = bc.name();
    return a;
}

double inf_alpha_residual(double observed, double f_plus, double f_minus) {
    const double lo = std::min(f_plus, f_minus), hi = std::max(f_plus, f_minus);
    if (observed < lo) return lo - observed;
    if (observed > hi) return observed - hi;
    return 0.0;
}

json to_json(const ResidualRow& r) {
    return json{{"n", r.n},
                {"bc", r.bc},
                {"f", r.f_id},
                {"observed", r.observed},
                {"observed_error", r.observed_error},
                {"alpha_hat", r.alpha_hat},
                {"alpha_error", r.alpha_error},
                {"deficit", r.deficit},
                {"f_plus", r.f_plus},
                {"f_minus", r.f_minus},
                {"combo", r.combo},
                {"residual", r.residual},
                {"residual_error", r.residual_error},
                {"inf_alpha_residual", r.inf_alpha_residual},
                {"autocorr", r.autocorr},
                {"sweeps", r.sweeps}};
}

std::vector<ResidualRow> run_E_THM(const ExperimentSpec& spec) {
    validate(spec);
    const LocalFunction f = LocalFunction::spin({0, 0});
    const double f_plus = pure_phase_reference(spec.beta, f, 5, 1e-9).value;
    const double f_minus = pure_phase_reference(spec.beta, f.flipped(), 5, 1e-9).value;
    const int nb = static_cast<int>(spec.bcs.size());
    return run_cells<ResidualRow>(static_cast<int>(spec.n_list.size()) * nb, [&](int cell) {
        const int n = spec.n_list[cell / nb];
        const BoundaryCondition bc = parse_bc(spec.bcs[cell % nb], BoxSpec{n}.rect());
        const BoxSpec core{core_radius(n, spec.xi)};
        if (core.n >= n) throw DomainError("core box does not fit inside the box");
        MultiObservable obs;
        obs.names = {"f", "plus_circuit", "deficit", "x"};
        obs.fn = [&](const SpinConfiguration& c, std::vector<double>& out) {
            const double v = f(c);
            const bool p = circuit_event(c, core, 1);
            out[0] = v;
            out[1] = p;
            out[2] = !p && !circuit_event(c, core, -1);
            // Per-sample residual; its mean is observed - combo exactly.
            out[3] = v - (p ? f_plus : f_minus);
        };
        const auto st = pooled_chains(spec, bc, n, obs, nullptr, static_cast<std::uint64_t>(cell % nb));
        ResidualRow row;
        row.n = n;
        row.bc = bc.name();
        row.f_id = "sigma0";
        row.observed = st[0].mean;
        row.observed_error = st[0].std_error;
        row.alpha_hat = std::clamp(st[1].mean, 0.0, 1.0);
        row.alpha_error = st[1].std_error;
        row.deficit = st[2].mean;
        row.f_plus = f_plus;
        row.f_minus = f_minus;
        row.combo = row.alpha_hat * f_plus + (1 - row.alpha_hat) * f_minus;
        row.residual = std::abs(row.observed - row.combo);
        row.residual_error = st[3].std_error;
        row.inf_alpha_residual = inf_alpha_residual(row.observed, f_plus, f_minus);
        row.autocorr = st[3].autocorr_estimate;
        row.sweeps = sweeps_for(spec, n) * static_cast<long long>(spec.seeds.size());
        return row;
    });
}

json to_json(const OptRow& r) {
    return json{{"n", r.n},
                {"k", r.k},
                {"F", r.F},
                {"F_error", r.F_error},
                {"worst_j", r.worst_j},
                {"worst_residual", r.worst_residual},
                {"worst_error", r.worst_error},
                {"sweeps", r.sweeps}};
}

std::vector<OptRow> run_E_OPT(const ExperimentSpec& spec) {
    validate(spec);
    // f_j is a translate of f_1; pure-phase references are translation
    // invariant.
    const LocalFunction f1 = LocalFunction::from({{0, 0}, {0, 1}}, [](const std::vector<int>& s) { return s[1] - s[0]; });
    const double f_plus = pure_phase_reference(spec.beta, f1, 5, 1e-9).value;
    const double f_minus = pure_phase_reference(spec.beta, f1.flipped(), 5, 1e-9).value;
    return run_cells<OptRow>(static_cast<int>(spec.n_list.size()), [&](int cell) {
        const int n = spec.n_list[cell];
        const int k = static_cast<int>(std::floor(spec.c1 * std::sqrt(static_cast<double>(n))));
        const BoundaryCondition bc = BoundaryCondition::dobrushin(BoxSpec{n}.rect());
        MultiObservable obs;
        obs.names = {"F"};
        for (int j = -k + 1; j <= k; ++j) obs.names.push_back("f" + std::to_string(j));
        obs.fn = [k](const SpinConfiguration& c, std::vector<double>& out) {
            out[0] = c.spin(0, k) - c.spin(0, -k);
            for (int j = -k + 1; j <= k; ++j) out[j + k] = c.spin(0, j) - c.spin(0, j - 1);
        };
        const auto st = pooled_chains(spec, bc, n, obs);
        OptRow row;
        row.n = n;
        row.k = k;
        row.F = st[0].mean;
        row.F_error = st[0].std_error;
        for (int j = -k + 1; j <= k; ++j) {
            const auto& s = st[j + k];
            const double r = inf_alpha_residual(s.mean, f_plus, f_minus);
            if (r > row.worst_residual || j == -k + 1) {
                row.worst_residual = r;
                row.worst_error = s.std_error;
                row.worst_j = j;
            }
        }
        row.sweeps = sweeps_for(spec, n) * static_cast<long long>(spec.seeds.size());
        return row;
    });
}

json to_json(const CrossRow& r) {
    return json{{"n", r.n},
                {"bc", r.bc},
                {"probe", r.probe},
                {"p_ge2", r.p_ge2},
                {"p_ge2_error", r.p_ge2_error},
                {"p_ge1", r.p_ge1},
                {"autocorr", r.autocorr},
                {"effective_samples", r.effective_samples},
                {"sweeps", r.sweeps}};
}

std::vector<CrossRow> run_E_CROSS(const ExperimentSpec& spec) {
    validate(spec);
    const int nb = static_cast<int>(spec.bcs.size());
    return run_cells<CrossRow>(static_cast<int>(spec.n_list.size()) * nb, [&](int cell) {
        const int n = spec.n_list[cell / nb];
        const BoundaryCondition bc = parse_bc(spec.bcs[cell % nb], BoxSpec{n}.rect());
        const BoxSpec probe{static_cast<int>(std::ceil(std::pow(static_cast<double>(n), spec.a) - 1e-12))};
        MultiObservable obs;
        obs.names = {"ge2", "ge1"};
        obs.fn = [probe](const SpinConfiguration& c, std::vector<double>& out) {
            const int k = crossing_count(extract_contours(c), probe);
            out[0] = k >= 2;
            out[1] = k >= 1;
        };
        std::vector<ChainResult> runs;
        const auto st = pooled_chains(spec, bc, n, obs, &runs, static_cast<std::uint64_t>(cell % nb));
        CrossRow row;
        row.n = n;
        row.bc = bc.name();
        row.probe = probe.n;
        row.p_ge2 = st[0].mean;
        row.p_ge2_error = st[0].std_error;
        row.p_ge1 = st[1].mean;
        row.autocorr = st[0].autocorr_estimate;
        const long long sweeps = sweeps_for(spec, n);
        for (const auto& r : runs) {
            const auto samples = static_cast<double>(r.series[0].size());
            const double tau = r.stats[0].autocorr_estimate;
            row.effective_samples += tau > 0 ? std::min(samples, static_cast<double>(sweeps) / (2 * tau)) : samples;
        }
        row.sweeps = sweeps * static_cast<long long>(spec.seeds.size());
        return row;
    });
}

json to_json(const FluctRow& r) {
    return json{{"n", r.n},
                {"probe", r.probe},
                {"hit", r.hit},
                {"hit_error", r.hit_error},
                {"spread", r.spread},
                {"spread_error", r.spread_error},
                {"mean_height", r.mean_height},
                {"sweeps", r.sweeps}};
}

InterfaceSample interface_sample(const ContourFamily& f, int probe) {
    if (f.open_contours.size() != 1) throw NotSingleInterface("expected exactly one open contour");
    const auto prof = interface_height_profile(f);
    const auto it = prof.find(0);
    if (it == prof.end() || it->second.empty()) throw NotSingleInterface("interface misses column 0");
    return {median(it->second), meets_dual_box(f.open_contours[0], probe)};
}

namespace {

// Spread (standard deviation) of a series with a jackknife error over
// batches.
std::pair<double, double> spread_with_error(const std::vector<std::vector<double>>& series, int batches_per_run) {
    std::vector<double> b1, b2, w;
    for (const auto& s : series) {
        const std::size_t len = s.size() / batches_per_run;
        if (len == 0) continue;
        for (int b = 0; b < batches_per_run; ++b) {
            double s1 = 0, s2 = 0;
            for (std::size_t i = b * len; i < (b + 1) * len; ++i) s1 += s[i], s2 += s[i] * s[i];
            b1.push_back(s1);
            b2.push_back(s2);
            w.push_back(static_cast<double>(len));
        }
    }
    const std::size_t m = b1.size();
    auto sd = [](double s1, double s2, double n) { return std::sqrt(std::max(0.0, s2 / n - (s1 / n) * (s1 / n))); };
    double t1 = 0, t2 = 0, tw = 0;
    for (std::size_t i = 0; i < m; ++i) t1 += b1[i], t2 += b2[i], tw += w[i];
    if (tw == 0) return {0.0, 0.0};
    const double full = sd(t1, t2, tw);
    if (m < 2) return {full, 0.0};
    std::vector<double> jk(m);
    double jm = 0;
    for (std::size_t i = 0; i < m; ++i) {
        jk[i] = sd(t1 - b1[i], t2 - b2[i], tw - w[i]);
        jm += jk[i] / static_cast<double>(m);
    }
    double v = 0;
    for (double x : jk) v += (x - jm) * (x - jm);
    return {full, std::sqrt(v * static_cast<double>(m - 1) / static_cast<double>(m))};
}

}  // namespace

FluctRow fluctuation_stats(const std::vector<ContourFamily>& ensemble, int probe) {
    FluctRow row;
    row.probe = probe;
    std::vector<double> h, hit;
    for (const auto& f : ensemble) {
        const auto s = interface_sample(f, probe);
        h.push_back(s.height);
        hit.push_back(s.hit);
    }
    const auto hs = mean_and_error(hit);
    row.hit = hs.mean;
    row.hit_error = hs.std_error;
    const auto [sd, sde] = spread_with_error({h}, std::min<int>(32, std::max<int>(1, static_cast<int>(h.size()))));
    row.spread = sd;
    row.spread_error = sde;
    row.mean_height = mean_and_error(h).mean;
    return row;
}

std::vector<FluctRow> run_E_FLUCT(const ExperimentSpec& spec) {
    validate(spec);
    return run_cells<FluctRow>(static_cast<int>(spec.n_list.size()), [&](int cell) {
        const int n = spec.n_list[cell];
        const int probe = static_cast<int>(std::ceil(2.0 * std::pow(static_cast<double>(n), spec.xi) - 1e-12));
        const BoundaryCondition bc = BoundaryCondition::dobrushin(BoxSpec{n}.rect());
        MultiObservable obs;
        obs.names = {"height", "hit"};
        obs.fn = [probe](const SpinConfiguration& c, std::vector<double>& out) {
            const auto s = interface_sample(extract_contours(c), probe);
            out[0] = s.height;
            out[1] = s.hit;
        };
        std::vector<ChainResult> runs;
        const auto st = pooled_chains(spec, bc, n, obs, &runs);
        FluctRow row;
        row.n = n;
        row.probe = probe;
        row.hit = st[1].mean;
        row.hit_error = st[1].std_error;
        row.mean_height = st[0].mean;
        std::vector<std::vector<double>> hs;
        for (const auto& r : runs) hs.push_back(r.series[0]);
        const auto [sd, sde] = spread_with_error(hs, 32);
        row.spread = sd;
        row.spread_error = sde;
        row.sweeps = sweeps_for(spec, n) * static_cast<long long>(spec.seeds.size());
        return row;
    });
}

json to_json(const RandbcRow& r) {
    return json{{"n", r.n},
                {"probe", r.probe},
                {"draws", r.draws},
                {"fraction", r.fraction},
                {"fraction_error", r.fraction_error},
                {"sweeps", r.sweeps}};
}

std::vector<RandbcRow> run_E_RANDBC(const ExperimentSpec& spec) {
    validate(spec);
    const int nn = static_cast<int>(spec.n_list.size());
    // One cell per (n, draw).
    const auto per_draw = run_cells<double>(nn * spec.draws, [&](int cell) {
        const int n = spec.n_list[cell / spec.draws];
        const int d = cell % spec.draws;
        const BoxSpec probe{static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.75) - 1e-12))};
        const std::uint64_t bc_seed = spec.seeds.front() * 1000003ULL + static_cast<std::uint64_t>(d);
        const BoundaryCondition bc = BoundaryCondition::bernoulli(BoxSpec{n}.rect(), 0.5, bc_seed);
        MultiObservable obs;
        obs.names = {"ge1"};
        obs.fn = [probe](const SpinConfiguration& c, std::vector<double>& out) {
            out[0] = crossing_count(extract_contours(c), probe) >= 1;
        };
        const ChainResult res = run_chain_multi(make_chain(spec, bc, n, spec.seeds.front(), static_cast<std::uint64_t>(d)), obs);
        return res.stats[0].mean;
    });
    std::vector<RandbcRow> rows;
    for (int i = 0; i < nn; ++i) {
        const int n = spec.n_list[i];
        const std::vector<double> v(per_draw.begin() + i * spec.draws, per_draw.begin() + (i + 1) * spec.draws);
        const auto st = mean_and_error(v);
        RandbcRow row;
        row.n = n;
        row.probe = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.75) - 1e-12));
        row.draws = spec.draws;
        row.fraction = st.mean;
        row.fraction_error = st.std_error;
        row.sweeps = sweeps_for(spec, n);
        rows.push_back(row);
    }
    return rows;
}

LineFit fit_power(const std::vector<int>& n, const std::vector<double>& y, const std::vector<double>& err) {
    if (n.size() != y.size() || n.size() < 2) throw DomainError("power fit needs matching data");
    std::vector<double> lx, ly, ls;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(y[i] > 0) || n[i] <= 0) throw DomainError("power fit needs positive data");
        lx.push_back(std::log(static_cast<double>(n[i])));
        ly.push_back(std::log(y[i]));
        if (!err.empty()) ls.push_back(err[i] > 0 ? err[i] / y[i] : 0.0);
    }
    const bool weighted = !ls.empty() && std::all_of(ls.begin(), ls.end(), [](double s) { return s > 0; });
    return fit_line(lx, ly, weighted ? ls : std::vector<double>{});
}

ExperimentRecord run_experiment(const ExperimentSpec& spec) {
    validate(spec);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRecord rec;
    rec.spec = spec;
    rec.code_hash = code_hash();
    rec.seeds = spec.seeds;
    json& sum = rec.summary;
    switch (spec.id) {
        case ExperimentId::THM: {
            const auto rows = run_E_THM(spec);
            for (const auto& r : rows) rec.rows.push_back(to_json(r));
            for (const auto& name : spec.bcs) {
                std::vector<int> ns;
                std::vector<double> res, err;
                std::string label;
                for (const auto& r : rows) {
                    if (r.bc != parse_bc(name, BoxSpec{r.n}.rect()).name()) continue;
                    label = r.bc;
                    ns.push_back(r.n);
                    res.push_back(r.residual);
                    err.push_back(r.residual_error);
                }
                json fit = fit_json(ns, res, err);
                fit["decreasing_2sigma"] = strictly_decreasing(res, err, 2.0);
                bool zero = true;
                for (std::size_t i = 0; i < res.size(); ++i) zero = zero && res[i] <= 3 * err[i];
                fit["consistent_with_zero"] = zero;
                sum[label] = fit;
            }
            break;
        }
        case ExperimentId::OPT: {
            const auto rows = run_E_OPT(spec);
            std::vector<int> ns;
            std::vector<double> w, e;
            double f_min = 1e300;
            for (const auto& r : rows) {
                rec.rows.push_back(to_json(r));
                ns.push_back(r.n);
                w.push_back(r.worst_residual);
                e.push_back(r.worst_error);
                f_min = std::min(f_min, r.F);
            }
            sum = fit_json(ns, w, e);
            sum["F_min"] = f_min;
            break;
        }
        case ExperimentId::CROSS: {
            const auto rows = run_E_CROSS(spec);
            std::vector<double> p, e;
            for (const auto& r : rows) {
                rec.rows.push_back(to_json(r));
                p.push_back(r.p_ge2);
                e.push_back(r.p_ge2_error);
            }
            sum["decreasing"] = strictly_decreasing(p, std::vector<double>(p.size(), 0.0), 0.0);
            sum["decreasing_2sigma"] = strictly_decreasing(p, e, 2.0);
            sum["final"] = p.empty() ? 0.0 : p.back();
            break;
        }
        case ExperimentId::FLUCT: {
            const auto rows = run_E_FLUCT(spec);
            std::vector<int> ns;
            std::vector<double> sp, se, hit, he;
            for (const auto& r : rows) {
                rec.rows.push_back(to_json(r));
                ns.push_back(r.n);
                sp.push_back(r.spread);
                se.push_back(r.spread_error);
                hit.push_back(r.hit);
                he.push_back(r.hit_error);
            }
            sum["spread"] = fit_json(ns, sp, se);
            sum["hit"] = fit_json(ns, hit, he);
            sum["hit_decreasing"] = strictly_decreasing(hit, std::vector<double>(hit.size(), 0.0), 0.0);
            break;
        }
        case ExperimentId::RELAX: {
            try {
                const RelaxationFit fit =
                    relaxation_rate(spec.beta, LocalFunction::spin({0, 0}), spec.n_list, spec.sweeps, spec.seeds.front());
                for (std::size_t i = 0; i < fit.n_used.size(); ++i)
                    rec.rows.push_back(json{{"n", fit.n_used[i]}, {"difference", fit.differences[i]}});
                sum = json{{"slope", fit.slope}, {"slope_error", fit.slope_error}};
            } catch (const SignalBelowNoise& e) {
                sum = json{{"signal_below_noise", true}, {"message", e.what()}};
            }
            break;
        }
        case ExperimentId::OZ: {
            for (int width : sorted_unique(spec.n_list)) {
                for (const auto& [p, q] : tension_directions()) {
                    const auto est = tau_direction(spec.beta, p, q, width);
                    const auto prof = dual_decay_profile(spec.beta, p, q, width);
                    for (std::size_t i = 0; i < prof.r.size(); ++i) {
                        const double r = prof.r[i];
                        rec.rows.push_back(json{{"width", width},
                                                {"p", p},
                                                {"q", q},
                                                {"r", r},
                                                {"log_g", prof.log_g[i]},
                                                {"tau", est.value},
                                                {"prefactor", prof.log_g[i] + est.value * r + 0.5 * std::log(r)}});
                    }
                }
            }
            break;
        }
        case ExperimentId::RANDBC: {
            const auto rows = run_E_RANDBC(spec);
            std::vector<double> fr;
            for (const auto& r : rows) {
                rec.rows.push_back(to_json(r));
                fr.push_back(r.fraction);
            }
            sum["decreasing"] = strictly_decreasing(fr, std::vector<double>(fr.size(), 0.0), 0.0);
            break;
        }
        case ExperimentId::DUAL: {
            bool all = true;
            double worst = 0;
            for (int n : spec.n_list) {
                for (const auto& name : spec.bcs) {
                    const auto bc = parse_bc(name, BoxSpec{n}.rect());
                    const CheckReport r = duality_identity_check(bc, spec.beta);
                    rec.rows.push_back(json{{"n", n},
                                            {"bc", bc.name()},
                                            {"lhs", r.lhs},
                                            {"rhs", r.rhs},
                                            {"margin", r.margin},
                                            {"passed", r.passed}});
                    all = all && r.passed;
                    worst = std::max(worst, r.margin);
                }
            }
            sum = json{{"all_passed", all}, {"worst_margin", worst}};
            break;
        }
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

bool experiment_assertions(const ExperimentRecord& rec, std::string* why) {
    const json& s = rec.summary;
    auto fail = [why](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    switch (rec.spec.id) {
        case ExperimentId::THM:
            for (const auto& [label, fit] : s.items()) {
                if (label == "plus") {
                    if (!fit.value("consistent_with_zero", false)) return fail("plus residual is not consistent with 0");
                } else if (!fit.value("decreasing_2sigma", false)) {
                    return fail(label + " residual is not decreasing beyond 2 sigma");
                }
            }
            return true;
        case ExperimentId::OPT:
            if (!(s.value("F_min", 0.0) > 0)) return fail("<F> is not positive");
            return true;
        case ExperimentId::CROSS:
            if (!s.value("decreasing", false)) return fail("P(N_cr >= 2) is not decreasing");
            return true;
        case ExperimentId::FLUCT:
            if (!s.value("hit_decreasing", false)) return fail("hit probability is not decreasing");
            return true;
        case ExperimentId::RELAX:
            if (s.value("signal_below_noise", false)) return fail("relaxation signal below noise");
            return true;
        case ExperimentId::DUAL:
            if (!s.value("all_passed", false)) return fail("duality identity failed");
            return true;
        case ExperimentId::OZ:
        case ExperimentId::RANDBC: return true;
    }
    return true;
}

ExperimentRecord rerun(const ExperimentRecord& rec) { return run_experiment(rec.spec); }

json record_to_json(const ExperimentRecord& rec) {
    return json{{"spec", to_json(rec.spec)},
                {"code_hash", rec.code_hash},
                {"seeds", rec.seeds},
                {"rows", rec.rows},
                {"summary", rec.summary}};
}

ExperimentRecord record_from_json(const json& j) {
    ExperimentRecord rec;
    rec.spec = spec_from_json(j.at("spec"));
    rec.code_hash = j.value("code_hash", std::string());
    rec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    for (const auto& r : j.at("rows")) rec.rows.push_back(r);
    rec.summary = j.value("summary", json::object());
    return rec;
}

std::vector<std::string> write_record(const ExperimentRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    const std::string id = to_string(rec.spec.id);
    const std::string rows_path = (fs::path(dir) / (id + ".rows.jsonl")).string();
    const std::string rec_path = (fs::path(dir) / (id + ".record.json")).string();
    const std::string meta_path = (fs::path(dir) / (id + ".meta.json")).string();
    std::string rows;
    for (const auto& r : rec.rows) rows += r.dump() + "\n";
    write_text_file(rows_path, rows);
    write_text_file(rec_path, record_to_json(rec).dump(2) + "\n");
    write_text_file(meta_path, json{{"wall_time", rec.wall_time}}.dump() + "\n");
    return {rows_path, rec_path, meta_path};
}

ExperimentRecord read_record(const std::string& record_json_path) { return record_from_json(read_json_file(record_json_path)); }

std::string code_hash() { return ISING_CODE_HASH; }

}  // namespace ising
