#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nlds/config.hpp"
#include "nlds/errors.hpp"
#include "nlds/experiments.hpp"
#include "nlds/io.hpp"
#include "nlds/plot.hpp"
#include "nlds/verify.hpp"

using namespace nlds;

namespace {

std::string field_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("nlds_unit_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::vector<std::string> column(const std::string& csv, int col) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> out;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i <= col; ++i) std::getline(ls, cell, ',');
        out.push_back(cell);
    }
    return out;
}

}  // namespace

TEST_CASE("config parsing with defaults and field-level errors") {
    const auto c = parse_config(R"({"experiment": "sweep-nu", "grid": {"nodes": 32, "bc": "dirichlet"},
                                    "sweep": {"nu": [0.5, 1, 2]}})");
    CHECK(c.experiment == Experiment::SweepNu);
    CHECK(c.grid.nodes == std::vector<int>{32});
    CHECK(c.grid.bc == Boundary::Dirichlet);
    CHECK(c.sweep.nu.size() == 3);
    CHECK(field_error(R"({"grid": {"nodes": 1}})").find("grid.nodes") != std::string::npos);
    CHECK(field_error(R"({"sweep": {"nu": [1, 0.5]}})").find("sweep.nu") != std::string::npos);
    CHECK(field_error(R"({"sweep": {"delta": [-1]}})").find("sweep.delta") != std::string::npos);
    CHECK(field_error(R"({"kernel": {"profile": "gauss"}})").find("kernel.profile") != std::string::npos);
    CHECK(field_error(R"({"kernel": {"delta": 0}})").find("kernel.delta") != std::string::npos);
    CHECK(field_error(R"({"tolerances": {"alpha_tol": 0}})").find("tolerances.alpha_tol") != std::string::npos);
    CHECK(field_error(R"({"colour": 1})").find("colour") != std::string::npos);
    CHECK(field_error(R"({"coefficient": {"form": "file"}})").find("coefficient.file") != std::string::npos);
    CHECK(field_error("{not json").find("JSON") != std::string::npos);
    CHECK(field_error(R"({"experiment": "dance"})").find("experiment") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("number formatting round trips") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("spectrum scenario on a zero coefficient, Neumann") {
    ScenarioConfig c;
    c.grid.nodes = {64};
    c.coefficient.form = "constant";
    c.coefficient.value = 0.0;
    const auto dir = scratch("spectrum");
    std::ostringstream out, log;
    RunContext ctx{dir.string(), "csv", 1, &out, &log};
    const auto res = run_scenario(c, ctx);
    CHECK(res.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "spectrum.csv"));
    CHECK(std::filesystem::exists(dir / "spectrum_report.txt"));
    const std::string csv = out.str();
    CHECK(csv.rfind(kSpectrumCsvHeader, 0) == 0);
    const auto routes = column(csv, 5);
    CHECK(routes == std::vector<std::string>{"dense_eig", "rayleigh", "growth_rate", "radius_root"});
    for (const auto& v : column(csv, 6)) CHECK(std::abs(std::stod(v)) < 1e-10);
}

TEST_CASE("sweep over nu: decreasing column, endpoint checks") {
    ScenarioConfig c;
    c.grid.nodes = {64};
    c.grid.bc = Boundary::Neumann;
    const std::vector<double> nus{1e-3, 1e-2, 0.1, 1, 10, 100, 1000};
    const auto r = sweep_nu(c, nus, 2);
    REQUIRE(r.rows.size() == nus.size());
    CHECK(r.all_pass());
    std::vector<std::string> names;
    for (const auto& ch : r.checks) names.push_back(ch.name);
    CHECK(names == std::vector<std::string>{"strictly_decreasing", "small_nu_limit", "large_nu_limit"});
    CHECK(r.csv() == sweep_nu(c, nus, 1).csv());
}

TEST_CASE("sweep over nu, Dirichlet divergence surrogate and constant column") {
    ScenarioConfig c;
    c.grid.nodes = {48};
    c.grid.bc = Boundary::Dirichlet;
    auto r = sweep_nu(c, {1e-3, 1.0, 1e3});
    CHECK(r.all_pass());
    CHECK(r.checks.back().name == "large_nu_divergence");
    c.grid.bc = Boundary::Neumann;
    c.coefficient.form = "constant";
    c.coefficient.value = 0.3;
    r = sweep_nu(c, {0.1, 1.0, 10.0});
    REQUIRE(r.checks.size() == 1);
    CHECK(r.checks[0].name == "constant_column");
    CHECK(r.checks[0].pass);
}

TEST_CASE("sweep over nu with refinement cross-check") {
    ScenarioConfig c;
    c.grid.nodes = {48};
    c.sweep.cross_check = true;
    const auto r = sweep_nu(c, {0.5, 1.0});
    CHECK(r.checks.front().name == "refinement_cross_check");
    CHECK(r.checks.front().pass);
}

TEST_CASE("sweep over delta: auto resolution, single row, budget warning") {
    GridSpec gs;
    gs.nodes = {16};
    CHECK(auto_resolution(gs, 0.02, 8)[0] == 400);
    CHECK(auto_resolution(gs, 1.0, 8)[0] == 16);
    ScenarioConfig c;
    c.grid.nodes = {32};
    c.grid.bc = Boundary::Periodic;
    c.nu = {0.1};
    const auto one = sweep_delta(c, {0.3});
    CHECK(one.rows.size() == 1);
    CHECK(one.csv().find('\n') != std::string::npos);
    const auto wide = sweep_delta(c, {1.0, 50.0});
    REQUIRE(wide.checks.size() == 1);
    CHECK(wide.checks[0].name == "large_delta_limit");
    CHECK(wide.checks[0].pass);
    c.sweep.dense_budget = 100;
    CHECK(sweep_delta(c, {0.05}).warnings.size() == 1);
}

TEST_CASE("evolve and compete scenarios write their artifacts") {
    ScenarioConfig c;
    c.grid.nodes = {32};
    c.evolve.T = 0.5;
    c.evolve.initial = "bump";
    const auto dir = scratch("evolve");
    std::ostringstream out, log;
    RunContext ctx{dir.string(), "report", 1, &out, &log};
    c.experiment = Experiment::Evolve;
    CHECK(run_scenario(c, ctx).exit_code == 0);
    CHECK(std::filesystem::exists(dir / "trajectory.csv"));
    CHECK(out.str().find("mean_log_growth") != std::string::npos);

    c.experiment = Experiment::Compete;
    c.grid.nodes = {64};
    c.grid.bc = Boundary::Dirichlet;
    c.kernel.delta = 0.3;
    c.nu = {1.0};
    c.coefficient.offset = 1.0;
    c.compete.stride = 50;
    const auto res = run_scenario(c, ctx);
    CHECK(res.exit_code == 0);
    for (const char* f : {"competition.csv", "competition_diagnostics.csv", "competition_report.txt", "competition.svg"})
        CHECK(std::filesystem::exists(dir / f));
    c.grid.bc = Boundary::Periodic;
    CHECK_THROWS_AS(run_scenario(c, ctx), ConfigError);
}

TEST_CASE("line plot is standalone SVG") {
    const std::string svg = line_plot_svg({"t", "x", "y", true}, {{"a", {1, 10, 100}, {3, 2, 1}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("node values from file") {
    const auto dir = scratch("file");
    std::filesystem::create_directories(dir);
    const auto p = dir / "a.txt";
    std::ofstream(p) << "# header\n0.5, 1.5\n2.5 3.5;4.5\n";
    const auto v = load_node_values(p.string(), 5);
    CHECK(v[4] == 4.5);
    CHECK_THROWS_AS(load_node_values(p.string(), 4), ConfigError);
}

TEST_CASE("verify: skip list, forced failures and determinism of cheap checks") {
    VerifyOptions o;
    o.only = {"baseline_zero_coefficient", "shift_equivariance", "integrator_accuracy"};
    o.skip = {"3"};
    const auto rep = verify_suite(o);
    CHECK(rep.count(CheckStatus::Pass) == 2);
    CHECK(rep.count(CheckStatus::Skip) == 14);
    CHECK(rep.csv() == verify_suite(o).csv());
    CHECK(rep.csv().rfind("name,criterion,tag,status,measured,tolerance\n", 0) == 0);
    o.tolerance_scale = 0.0;
    const auto forced = verify_suite(o);
    CHECK(forced.count(CheckStatus::Fail) == 2);
    CHECK_FALSE(forced.all_pass());
    o.skip = {"random", "slow"};
    o.only.clear();
    o.tolerance_scale = 1.0;
    for (const auto& c : verify_suite({0, {"random", "slow", "2d", "1", "4", "5", "7", "8", "9", "12", "14"}, 1.0, 1, {}}).checks)
        CHECK(c.status != CheckStatus::Fail);
    bool tags_named = true;
    for (const auto& info : list_checks()) tags_named &= !info.tag.empty() && info.criterion >= 1 && info.criterion <= 14;
    CHECK(tags_named);
}
