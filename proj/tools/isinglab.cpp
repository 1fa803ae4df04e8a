// isinglab: command-line front end to the library.
//
// Exit codes: 0 all assertions passed, 2 assertion failure, 3 capacity
// error, 1 anything else (bad input, I/O).

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "ising/duality.hpp"
#include "ising/errors.hpp"
#include "ising/experiments.hpp"
#include "ising/gibbs.hpp"
#include "ising/json_io.hpp"
#include "ising/report.hpp"
#include "ising/sampler.hpp"
#include "ising/tension.hpp"

using namespace ising;
using json = nlohmann::json;

namespace {

struct Options {
    std::vector<int> n{1};
    double beta = 0.6;
    std::vector<std::string> bc{"plus"};
    double xi = -1;
    double a = -1;
    std::vector<std::uint64_t> seed;
    long long sweeps = -1;
    std::string out;
    std::string format = "jsonl";
    std::string id;
    std::vector<std::string> inputs;
};

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_enumerate(const Options& o) {
    const Rect r = BoxSpec{o.n.front()}.rect();
    const auto bc = parse_bc(o.bc.front(), r);
    const MeasureOracle m = make_oracle(bc, o.beta);
    const double lz = log_partition_function(m);
    const double s0 = expectation(m, LocalFunction::spin({0, 0}));
    print({{"n", o.n.front()},
           {"beta", o.beta},
           {"bc", bc.name()},
           {"engine", m.engine == Engine::Enumeration ? "enumeration" : "transfer"},
           {"log_z", lz},
           {"sigma0", s0}});
    return 0;
}

int cmd_sample(const Options& o) {
    const Rect r = BoxSpec{o.n.front()}.rect();
    ChainSpec spec;
    spec.bc = parse_bc(o.bc.front(), r);
    spec.beta = o.beta;
    spec.seed = o.seed.empty() ? 1 : o.seed.front();
    spec.sweeps = o.sweeps > 0 ? o.sweeps : 100000;
    spec.burn_in = std::max(default_burn_in(spec.bc), spec.sweeps / 20);
    const auto area = static_cast<double>(r.size());
    const auto st = run_chain(spec, {Observable::local(LocalFunction::spin({0, 0}), "sigma0"),
                                     {"energy_per_site", [area](const SpinConfiguration& c) { return hamiltonian(c) / area; }}});
    json j{{"n", o.n.front()}, {"beta", o.beta}, {"bc", spec.bc.name()}, {"seed", spec.seed}, {"sweeps", spec.sweeps}};
    const char* names[] = {"sigma0", "energy_per_site"};
    for (int k = 0; k < 2; ++k)
        j[names[k]] = {{"mean", st[k].mean}, {"error", st[k].std_error}, {"autocorr", st[k].autocorr_estimate}};
    print(j);
    return 0;
}

int cmd_duality(const Options& o) {
    bool ok = true;
    json all = json::array();
    for (int n : o.n) {
        for (const auto& name : o.bc) {
            const auto rep = duality_identity_check(parse_bc(name, BoxSpec{n}.rect()), o.beta);
            ok = ok && rep.passed;
            json j = to_json(rep);
            j["n"] = n;
            all.push_back(j);
        }
    }
    print(all);
    return ok ? 0 : 2;
}

int cmd_tau(const Options& o) {
    const auto axis = tau_axis(o.beta);
    const auto grid = cached_tau_grid(o.beta, o.out);
    json g = grid_to_json(grid);
    json j{{"beta", o.beta}, {"tau_axis", {{"value", axis.value}, {"error", axis.error}}}, {"grid", g}};
    if (o.beta > self_dual_beta()) {
        const auto sti = sti_scan(grid, 20000, o.seed.empty() ? 1 : o.seed.front());
        j["sti"] = {{"kappa_hat", sti.kappa_hat}, {"kappa_error", sti.kappa_error}, {"samples", sti.samples}};
    }
    print(j);
    return 0;
}

int cmd_experiment(const Options& o, const CLI::App& sub) {
    ExperimentSpec spec = default_spec(experiment_id_from(o.id));
    if (sub.count("--n")) spec.n_list = o.n;
    if (sub.count("--beta")) spec.beta = o.beta;
    if (sub.count("--bc")) spec.bcs = o.bc;
    if (o.xi >= 0) spec.xi = o.xi;
    if (o.a >= 0) spec.a = o.a;
    if (!o.seed.empty()) spec.seeds = o.seed;
    if (o.sweeps > 0) spec.sweeps = o.sweeps;
    spec.output_path = o.out;
    const ExperimentRecord rec = run_experiment(spec);
    if (!o.out.empty()) {
        for (const auto& p : write_record(rec, o.out)) std::cerr << "wrote " << p << "\n";
        const auto fmt = report_format_from(o.format);
        const std::string ext = o.format == "jsonl" ? "report.jsonl" : o.format == "csv" ? "report.csv" : "report.svg";
        const auto path = (std::filesystem::path(o.out) / (to_string(spec.id) + "." + ext)).string();
        emit_report({rec}, fmt, path);
        std::cerr << "wrote " << path << "\n";
    }
    print({{"experiment", to_string(spec.id)}, {"rows", rec.rows}, {"summary", rec.summary}, {"wall_time", rec.wall_time}});
    std::string why;
    if (!experiment_assertions(rec, &why)) {
        std::cerr << "assertion failed: " << why << "\n";
        return 2;
    }
    return 0;
}

int cmd_report(const Options& o) {
    std::vector<ExperimentRecord> recs;
    for (const auto& p : o.inputs) recs.push_back(read_record(p));
    const auto fmt = report_format_from(o.format);
    if (o.out.empty()) std::cout << render_report(recs, fmt);
    else emit_report(recs, fmt, o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D Ising laboratory: exact enumeration, sampling, contours, duality, surface tension"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* s, bool many_n) {
        if (many_n) s->add_option("--n", o.n, "box half-size(s)")->delimiter(',');
        else s->add_option("--n", o.n, "box half-size")->expected(1);
        s->add_option("--beta", o.beta, "inverse temperature");
    };
    auto bc_opt = [&o](CLI::App* s) {
        s->add_option("--bc", o.bc, "plus|minus|dobrushin|quadrant|bernoulli:p:seed|file:PATH")->delimiter(',');
    };

    auto* en = app.add_subcommand("enumerate", "exact log Z and <sigma_0>");
    common(en, false);
    bc_opt(en);
    auto* sa = app.add_subcommand("sample", "heat-bath chain statistics");
    common(sa, false);
    bc_opt(sa);
    sa->add_option("--seed", o.seed)->expected(1);
    sa->add_option("--sweeps", o.sweeps);
    auto* du = app.add_subcommand("duality-check", "partition ratio against the dual correlation");
    common(du, true);
    bc_opt(du);
    auto* ta = app.add_subcommand("tau", "surface tension and sharp triangle inequality");
    ta->add_option("--beta", o.beta);
    ta->add_option("--seed", o.seed)->expected(1);
    ta->add_option("--out", o.out, "cache directory for the direction grid");
    auto* ex = app.add_subcommand("experiment", "run a named experiment");
    ex->add_option("id", o.id, "E-THM|E-OPT|E-CROSS|E-FLUCT|E-RELAX|E-OZ|E-RANDBC|E-DUAL")->required();
    common(ex, true);
    bc_opt(ex);
    ex->add_option("--xi", o.xi);
    ex->add_option("--a", o.a);
    ex->add_option("--seed", o.seed)->delimiter(',');
    ex->add_option("--sweeps", o.sweeps);
    ex->add_option("--out", o.out, "output directory");
    ex->add_option("--format", o.format)->check(CLI::IsMember({"jsonl", "csv", "svg"}));
    auto* re = app.add_subcommand("report", "render records as jsonl, csv or svg");
    re->add_option("records", o.inputs, "record files (*.record.json)")->required();
    re->add_option("--out", o.out, "output file (stdout when absent)");
    re->add_option("--format", o.format)->check(CLI::IsMember({"jsonl", "csv", "svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*en) return cmd_enumerate(o);
        if (*sa) return cmd_sample(o);
        if (*du) return cmd_duality(o);
        if (*ta) return cmd_tau(o);
        if (*ex) return cmd_experiment(o, *ex);
        if (*re) return cmd_report(o);
    } catch (const CapacityExceeded& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
