#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/boundary.hpp"
#include "ising/contour.hpp"
#include "ising/sampler.hpp"

namespace ising {

enum class ExperimentId { THM, OPT, CROSS, FLUCT, RELAX, OZ, RANDBC, DUAL };

std::string to_string(ExperimentId id);  // "E-THM", ...
// Accepts "E-THM", "THM" or "thm".
ExperimentId experiment_id_from(const std::string& s);

struct ExperimentSpec {
    ExperimentId id = ExperimentId::THM;
    std::vector<int> n_list;
    double beta = 0.7;
    double xi = 0.05;
    double a = 0.8;
    // Boundary-condition names as accepted by parse_bc.
    std::vector<std::string> bcs;
    // One independent chain per seed; cell results are pooled over seeds.
    std::vector<std::uint64_t> seeds{1};
    // Sweeps at n_list.front(); sweeps(n) = sweeps * (n / n0)^sweep_growth.
    long long sweeps = 100000;
    double sweep_growth = 0.0;
    int thin = 10;
    double c1 = 2.0;   // E-OPT column half-height floor(c1 sqrt(n))
    int draws = 50;    // E-RANDBC boundary draws
    std::string output_path;
};

nlohmann::json to_json(const ExperimentSpec& s);
ExperimentSpec spec_from_json(const nlohmann::json& j);
// Throws DomainError when params are incomplete or out of range.
void validate(const ExperimentSpec& s);
long long sweeps_for(const ExperimentSpec& s, int n);
// Default parameter set for an experiment id.
ExperimentSpec default_spec(ExperimentId id);

struct AlphaEstimate {
    double alpha_hat = 0.0;
    double std_error = 0.0;
    double deficit = 0.0;  // fraction with neither circuit
    double deficit_error = 0.0;
    int n = 0;
    std::string bc;
};

// Core box Lambda_{floor(2 n^xi)}.
int core_radius(int n, double xi);

AlphaEstimate estimate_alpha(int n, double beta, const BoundaryCondition& bc, double xi, const ChainSpec& chain);

struct ResidualRow {
    int n = 0;
    std::string bc;
    std::string f_id;
    double observed = 0.0;
    double observed_error = 0.0;
    double alpha_hat = 0.0;
    double alpha_error = 0.0;
    double deficit = 0.0;
    double f_plus = 0.0;
    double f_minus = 0.0;
    double combo = 0.0;
    double residual = 0.0;
    double residual_error = 0.0;
    double inf_alpha_residual = 0.0;
    double autocorr = 0.0;
    long long sweeps = 0;
};

nlohmann::json to_json(const ResidualRow& r);

// Distance from `observed` to the segment between f_plus and f_minus.
double inf_alpha_residual(double observed, double f_plus, double f_minus);

std::vector<ResidualRow> run_E_THM(const ExperimentSpec& spec);

struct OptRow {
    int n = 0;
    int k = 0;  // column half-height
    double F = 0.0;
    double F_error = 0.0;
    int worst_j = 0;
    double worst_residual = 0.0;
    double worst_error = 0.0;
    long long sweeps = 0;
};
nlohmann::json to_json(const OptRow& r);
std::vector<OptRow> run_E_OPT(const ExperimentSpec& spec);

struct CrossRow {
    int n = 0;
    std::string bc;
    int probe = 0;
    double p_ge2 = 0.0;
    double p_ge2_error = 0.0;
    double p_ge1 = 0.0;
    double autocorr = 0.0;
    double effective_samples = 0.0;
    long long sweeps = 0;
};
nlohmann::json to_json(const CrossRow& r);
std::vector<CrossRow> run_E_CROSS(const ExperimentSpec& spec);

struct FluctRow {
    int n = 0;
    int probe = 0;
    double hit = 0.0;
    double hit_error = 0.0;
    double spread = 0.0;
    double spread_error = 0.0;
    double mean_height = 0.0;
    long long sweeps = 0;
};
nlohmann::json to_json(const FluctRow& r);

// Column-0 median height and probe hit of a single-interface family.
struct InterfaceSample {
    double height = 0.0;
    bool hit = false;
};
InterfaceSample interface_sample(const ContourFamily& f, int probe);
// Spread and hit frequency of a fixed ensemble (no sampling).
FluctRow fluctuation_stats(const std::vector<ContourFamily>& ensemble, int probe);

std::vector<FluctRow> run_E_FLUCT(const ExperimentSpec& spec);

struct RandbcRow {
    int n = 0;
    int probe = 0;
    int draws = 0;
    double fraction = 0.0;
    double fraction_error = 0.0;
    long long sweeps = 0;
};
nlohmann::json to_json(const RandbcRow& r);
std::vector<RandbcRow> run_E_RANDBC(const ExperimentSpec& spec);

// Exponent of y ~ n^b by least squares on log-log.
LineFit fit_power(const std::vector<int>& n, const std::vector<double>& y, const std::vector<double>& err = {});

struct ExperimentRecord {
    ExperimentSpec spec;
    std::string code_hash;
    std::vector<std::uint64_t> seeds;
    std::vector<nlohmann::json> rows;
    nlohmann::json summary;
    double wall_time = 0.0;  // seconds; not part of the reproducible output
};

ExperimentRecord run_experiment(const ExperimentSpec& spec);
// The experiment's own post-conditions (monotone decay, positivity, ...);
// on failure `why` names the first one violated.
bool experiment_assertions(const ExperimentRecord& rec, std::string* why = nullptr);
// Same spec, fresh run.
ExperimentRecord rerun(const ExperimentRecord& rec);

// <dir>/<id>.rows.jsonl, <id>.record.json and <id>.meta.json (wall time).
// Returns the paths written.
std::vector<std::string> write_record(const ExperimentRecord& rec, const std::string& dir);
ExperimentRecord read_record(const std::string& record_json_path);
nlohmann::json record_to_json(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const nlohmann::json& j);

// Content hash of the library sources, fixed at build time.
std::string code_hash();

}  // namespace ising
