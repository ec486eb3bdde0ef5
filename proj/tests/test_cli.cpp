#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsengflow/cli/commands.hpp"
#include "tsengflow/cli/output.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tsengflow;
using namespace tsengflow::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tsengflow_test_cli" / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

ExperimentConfig short_run(const std::string& name) {
    ExperimentConfig c;
    c.integrator.t_end = 2.0;
    c.integrator.record_stride = 10;
    c.output_dir = scratch(name);
    return c;
}

}  // namespace

TEST_CASE("config defaults and unknown keys") {
    const auto c = parse_config_text("{}");
    CHECK(c.problem.kind == "interval_toy");
    CHECK(c.schedule.power_law.q == 0.1);
    CHECK_FALSE(c.allow_invalid_schedule);

    try {
        parse_config_text(R"({"schedule": {"kind": "power_law", "qq": 0.1}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/schedule/qq") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text(R"({"problem": {"kind": "nope"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"schedule": {"q": "x"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("seed override") {
    auto c = parse_config_text(R"({"problem": {"kind": "saddle", "seed": 3}})");
    override_seed(c, 99);
    CHECK(c.problem.saddle.seed == 99);
    CHECK(c.problem.gnep.seed == 99);
}

TEST_CASE("validate exit codes") {
    std::ostringstream out, err;
    auto c = short_run("validate_ok");
    CHECK(cmd_validate(c, out, err) == kSuccess);
    CHECK(fs::exists(c.output_dir / "validation.txt"));
    CHECK(slurp(c.output_dir / "validation.txt") == out.str());

    c.schedule.power_law.q = 0.2;
    c.schedule.power_law.r = 0.05;
    std::ostringstream out2;
    CHECK(cmd_validate(c, out2, err) == kScheduleInvalid);
    CHECK(out2.str().find("2q+r<=1/3") != std::string::npos);

    c.allow_invalid_schedule = true;
    std::ostringstream out3;
    CHECK(cmd_validate(c, out3, err) == kSuccess);
    CHECK(out3.str().find("warning:") != std::string::npos);
}

TEST_CASE("run writes the expected files") {
    auto c = short_run("run_files");
    c.oracle.attach_oracle_distance = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(c, out, err) == kSuccess);
    for (const char* f : {"trajectory.csv", "summary.txt", "residual.svg", "gap.svg", "validation.txt"}) {
        CHECK(fs::exists(c.output_dir / f));
    }
    const auto rows = lines(slurp(c.output_dir / "trajectory.csv"));
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == "t,norm_x,residual_fp,feasibility_gap,eps,beta,lambda,dist_oracle");
    CHECK(rows[1].rfind("0,0,", 0) == 0);
    CHECK(rows.back().back() != ',');
    const auto summary = slurp(c.output_dir / "summary.txt");
    CHECK(summary.find("final_residual_fp") != std::string::npos);
    CHECK(summary.find("final_feasibility_gap") != std::string::npos);
    CHECK(summary.find("final_dist_oracle") != std::string::npos);
    CHECK(slurp(c.output_dir / "residual.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("dist_oracle column is empty when disabled") {
    auto c = short_run("run_no_oracle");
    std::ostringstream out, err;
    REQUIRE(cmd_run(c, out, err) == kSuccess);
    const auto rows = lines(slurp(c.output_dir / "trajectory.csv"));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == ',');
}

TEST_CASE("run is byte-deterministic") {
    auto a = short_run("det_a"), b = short_run("det_b");
    a.problem.kind = b.problem.kind = "saddle";
    a.integrator.initial_fill = b.integrator.initial_fill = 2.0;
    std::ostringstream out, err;
    REQUIRE(cmd_run(a, out, err) == kSuccess);
    REQUIRE(cmd_run(b, out, err) == kSuccess);
    CHECK(slurp(a.output_dir / "trajectory.csv") == slurp(b.output_dir / "trajectory.csv"));
}

TEST_CASE("saddle gap is positive at an infeasible start") {
    auto c = short_run("saddle_gap");
    c.problem.kind = "saddle";
    c.integrator.initial_fill = 2.0;
    std::ostringstream out, err;
    REQUIRE(cmd_run(c, out, err) == kSuccess);
    const auto rows = lines(slurp(c.output_dir / "trajectory.csv"));
    std::istringstream first(rows[1]);
    std::string cell;
    for (int k = 0; k < 4; ++k) std::getline(first, cell, ',');
    CHECK(std::stod(cell) > 0.0);
}

TEST_CASE("run refuses an invalid schedule") {
    auto c = short_run("run_invalid");
    c.schedule.power_law.q = 0.2;
    c.schedule.power_law.r = 0.05;
    std::ostringstream out, err;
    CHECK(cmd_run(c, out, err) == kScheduleInvalid);
    CHECK_FALSE(fs::exists(c.output_dir / "trajectory.csv"));
}

TEST_CASE("run reports divergence") {
    auto c = short_run("run_diverge");
    c.problem.kind = "linear_1d";
    c.problem.slope = 1.0;
    c.schedule.kind = "constant";
    c.schedule.eps = 1.0;
    c.schedule.beta = 1.0;
    c.schedule.lambda = 0.45;
    c.integrator.method = Method::Euler;
    c.integrator.step = 50.0;
    c.integrator.t_end = 1e5;
    c.integrator.initial_fill = 1.0;
    c.allow_invalid_schedule = true;
    std::ostringstream out, err;
    CHECK(cmd_run(c, out, err) == kDivergence);
    CHECK(slurp(c.output_dir / "summary.txt").find("last_finite_t:") != std::string::npos);
}

TEST_CASE("oracle on the interval toy") {
    auto c = short_run("oracle_toy");
    std::ostringstream out, err;
    CHECK(cmd_oracle(c, out, err) == kSuccess);
    const auto p1 = lines(slurp(c.output_dir / "prop1.csv"));
    CHECK(p1[0] == "n,eps_n,beta_n,norm_xbar,norm_B_xbar");
    double previous = 2.0;
    for (std::size_t i = 1; i < p1.size(); ++i) {
        const double value = std::stod(p1[i].substr(p1[i].rfind(',') + 1));
        CHECK(value < previous);
        previous = value;
    }
    CHECK(previous < 1e-6);
    const auto p2 = lines(slurp(c.output_dir / "prop2.csv"));
    CHECK(p2[0] == "pair,lhs,rhs,margin");
    CHECK(p2[1] == "0,0,0,0");
    CHECK(p2.size() == static_cast<std::size_t>(c.oracle.pairs) + 2);
}

TEST_CASE("sampled parameter pairs") {
    OracleSettings s;
    const auto pairs = sample_parameter_pairs(s);
    REQUIRE(pairs.size() == static_cast<std::size_t>(s.pairs) + 1);
    CHECK(pairs[0].first.eps == pairs[0].second.eps);
    CHECK(pairs[0].first.beta == pairs[0].second.beta);
    for (const auto& [a, b] : pairs) {
        for (const auto& p : {a, b}) {
            CHECK(p.eps >= s.eps_lo);
            CHECK(p.eps <= s.eps_hi);
            CHECK(p.beta >= s.beta_lo);
            CHECK(p.beta <= s.beta_hi);
        }
    }
    const auto again = sample_parameter_pairs(s);
    CHECK(again.back().second.beta == pairs.back().second.beta);
}

TEST_CASE("sweep region") {
    auto c = short_run("sweep");
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(c, out, err) == kSuccess);
    const auto rows = lines(slurp(c.output_dir / "region.csv"));
    CHECK(rows[0] == kRegionHeader);
    CHECK(rows.size() == 100 * 100 + 1);
    bool saw_feasible = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].rfind(format_number(0.1) + "," + format_number(0.1) + ",", 0) == 0) {
            CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "true");
        }
        if (rows[i].rfind(format_number(0.2) + ",", 0) == 0) CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "false");
        saw_feasible = saw_feasible || rows[i].substr(rows[i].rfind(',') + 1) == "true";
    }
    CHECK(saw_feasible);
}

TEST_CASE("shipped configs parse") {
    for (const char* name : {"interval_toy", "saddle", "gnep", "paper-figure1-like"}) {
        CHECK_NOTHROW(load_config(fs::path(TSENGFLOW_CONFIG_DIR) / (std::string(name) + ".json")));
    }
}

TEST_CASE("svg chart skips nonpositive values") {
    const std::vector<double> x{0, 1, 2}, y{1.0, 0.0, 1e-3};
    const auto svg = log_line_chart_svg(x, y, "a<b", "t", "y");
    CHECK(svg.find("a&lt;b") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(log_line_chart_svg(x, std::vector<double>{0, 0, 0}, "t", "x", "y").find("no positive data") !=
          std::string::npos);
}
