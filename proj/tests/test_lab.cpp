#include <doctest.h>

#include <filesystem>

#include "ising/errors.hpp"
#include "ising/experiments.hpp"
#include "ising/json_io.hpp"
#include "ising/report.hpp"

using namespace ising;
using json = nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("ising_unit_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

ExperimentSpec tiny_thm() {
    ExperimentSpec s = default_spec(ExperimentId::THM);
    s.n_list = {4, 6};
    s.sweeps = 3000;
    s.thin = 2;
    s.seeds = {5, 6};
    return s;
}

}  // namespace

TEST_CASE("experiment ids") {
    CHECK(experiment_id_from("E-THM") == ExperimentId::THM);
    CHECK(experiment_id_from("randbc") == ExperimentId::RANDBC);
    CHECK(to_string(ExperimentId::OZ) == "E-OZ");
    CHECK_THROWS_AS(experiment_id_from("E-NOPE"), DomainError);
}

TEST_CASE("boundary condition parsing") {
    const Rect r = BoxSpec{2}.rect();
    CHECK(parse_bc("plus", r).label() == BcLabel::Plus);
    CHECK(parse_bc("quadrant", r).label() == BcLabel::Quadrant);
    const auto b = parse_bc("bernoulli:0.3:9", r);
    CHECK(b.values() == BoundaryCondition::bernoulli(r, 0.3, 9).values());
    CHECK_THROWS_AS(parse_bc("bogus", r), DomainError);
    CHECK_THROWS_AS(parse_bc("bernoulli:2:1", r), DomainError);
}

TEST_CASE("boundary condition files") {
    const auto dir = scratch("bc");
    const Rect r = BoxSpec{2}.rect();
    const auto bc = BoundaryCondition::bernoulli(r, 0.5, 3);
    const auto path = (dir / "bc.json").string();
    write_bc_file(bc, path);
    CHECK(read_bc_file(path, r).values() == bc.values());
    CHECK(parse_bc("file:" + path, r).values() == bc.values());
    CHECK_THROWS_AS(read_bc_file(path, BoxSpec{3}.rect()), SupportOutOfBox);
    json j = bc_to_json(bc);
    j[0][2] = 0;
    CHECK_THROWS_AS(bc_from_json(j, r), DomainError);
    j = bc_to_json(bc);
    j.erase(0);
    CHECK_THROWS_AS(bc_from_json(j, r), DomainError);
    CHECK_THROWS_AS(read_bc_file((dir / "missing.json").string(), r), IoError);
}

TEST_CASE("spec validation") {
    auto s = default_spec(ExperimentId::CROSS);
    CHECK_NOTHROW(validate(s));
    s.a = 0.7;
    CHECK_THROWS_AS(validate(s), DomainError);
    s = default_spec(ExperimentId::THM);
    s.xi = 0.5;
    CHECK_THROWS_AS(validate(s), DomainError);
    s = default_spec(ExperimentId::RANDBC);
    s.beta = 0.7;
    CHECK_THROWS_AS(validate(s), DomainError);
    s = default_spec(ExperimentId::RELAX);
    s.n_list = {1, 2};
    CHECK_THROWS_AS(validate(s), DomainError);
    s = default_spec(ExperimentId::OPT);
    s.n_list = {1};
    CHECK_THROWS_AS(validate(s), DomainError);
    const auto t = tiny_thm();
    CHECK(to_json(spec_from_json(to_json(t))) == to_json(t));
    CHECK(sweeps_for(default_spec(ExperimentId::THM), 32) == 1600000);
}

TEST_CASE("inf over alpha never exceeds the plug-in residual") {
    CHECK(inf_alpha_residual(0.2, 0.9, -0.9) == 0.0);
    CHECK(inf_alpha_residual(0.95, 0.9, -0.9) == doctest::Approx(0.05));
    CHECK(inf_alpha_residual(-1.0, 0.9, -0.9) == doctest::Approx(0.1));
}

TEST_CASE("fluctuation statistics of a flat ensemble") {
    const auto bc = BoundaryCondition::dobrushin(BoxSpec{5}.rect());
    const auto flat = extract_contours(SpinConfiguration::extend_boundary(bc));
    const auto row = fluctuation_stats(std::vector<ContourFamily>(64, flat), 1);
    CHECK(row.spread == 0.0);
    CHECK(row.hit == 1.0);
    CHECK(row.hit_error == 0.0);
    CHECK_THROWS_AS(interface_sample(extract_contours(SpinConfiguration::extend_boundary(BoundaryCondition::plus(bc.rect()))), 1),
                    NotSingleInterface);
}

TEST_CASE("power fits") {
    const auto f = fit_power({10, 20, 40}, {1.0, 0.5, 0.25});
    CHECK(f.slope == doctest::Approx(-1.0));
}

TEST_CASE("a tiny experiment is reproducible and round-trips") {
    const auto rec = run_experiment(tiny_thm());
    REQUIRE(rec.rows.size() == 6);
    for (const auto& r : rec.rows) {
        CHECK(r["inf_alpha_residual"].get<double>() <= r["residual"].get<double>() + 1e-12);
        CHECK(r["alpha_hat"].get<double>() >= 0.0);
        CHECK(r["alpha_hat"].get<double>() <= 1.0);
    }
    const auto again = rerun(rec);
    CHECK(record_to_json(again).dump() == record_to_json(rec).dump());

    const auto dir = scratch("record");
    const auto paths = write_record(rec, dir.string());
    CHECK(paths.size() == 3);
    const auto back = read_record((dir / "E-THM.record.json").string());
    CHECK(record_to_json(back).dump() == record_to_json(rec).dump());
    CHECK(back.code_hash == code_hash());
}

TEST_CASE("reports round-trip") {
    auto rec = run_experiment(default_spec(ExperimentId::DUAL));
    CHECK(experiment_assertions(rec));
    CHECK(rec.summary["all_passed"].get<bool>());
    for (auto fmt : {ReportFormat::JsonLines, ReportFormat::Csv}) {
        const auto rows = parse_report(render_report({rec}, fmt), fmt);
        REQUIRE(rows.size() == rec.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            json want = rec.rows[i];
            want["experiment"] = "E-DUAL";
            for (const auto& [k, v] : want.items()) {
                if (v.is_number_float()) CHECK(rows[i][k].get<double>() == v.get<double>());
                else CHECK(rows[i][k] == v);
            }
        }
    }
    const std::string svg = render_report({rec}, ReportFormat::Svg);
    CHECK(svg.rfind("<svg", 0) == 0);
    rec.rows.clear();
    CHECK(render_report({rec}, ReportFormat::Csv) == "experiment\n");
    CHECK(parse_report("experiment\n", ReportFormat::Csv).empty());
    CHECK_THROWS_AS(report_format_from("xml"), DomainError);
}
