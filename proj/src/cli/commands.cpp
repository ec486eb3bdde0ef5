#include "tsengflow/cli/commands.hpp"

#include "tsengflow/cli/output.hpp"
#include "tsengflow/dynamics.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace tsengflow::cli {
namespace {

namespace fs = std::filesystem;

void prepare_output(const ExperimentConfig& config) { fs::create_directories(config.output_dir); }

std::string describe_schedule(const ScheduleConfig& s) {
    if (s.kind == "power_law") {
        return fmt::format("power_law(b={}, q={}, r={}, sigma={})", s.power_law.b, s.power_law.q, s.power_law.r,
                           s.power_law.sigma);
    }
    if (s.kind == "constant") {
        return s.lambda ? fmt::format("constant(eps={}, beta={}, lambda={})", s.eps, s.beta, *s.lambda)
                        : fmt::format("constant(eps={}, beta={}, sigma={})", s.eps, s.beta, s.sigma);
    }
    return fmt::format("custom({} knots, sigma={})", s.table.size(), s.sigma);
}

struct ValidationOutcome {
    ValidationReport report;
    int status = kSuccess;
};

// Shared by validate and run: prints the report and decides the exit status.
ValidationOutcome validate_and_report(const ExperimentConfig& config, const ProblemInstance& problem,
                                      const Schedule& schedule, std::ostream& out, std::ostream& err) {
    ValidationOutcome outcome;
    outcome.report = validate_schedule(schedule, problem.eta(), problem.mu(), config.validation.horizon,
                                       config.validation.grid);
    std::string text = fmt::format("problem: {}\nschedule: {}\n", problem.name(), describe_schedule(config.schedule));
    text += outcome.report.to_text();
    if (!outcome.report.passed()) {
        const auto failed = outcome.report.failed_names();
        if (config.allow_invalid_schedule) {
            text += fmt::format("warning: schedule violates {} but allow_invalid_schedule is set; continuing\n",
                                fmt::join(failed, ", "));
            fmt::print(err, "warning: invalid schedule allowed by override ({})\n", fmt::join(failed, ", "));
        } else {
            text += fmt::format("error: schedule violates {}\n", fmt::join(failed, ", "));
            outcome.status = kScheduleInvalid;
        }
    }
    out << text;
    write_file(config.output_dir / "validation.txt", text);
    write_file(config.output_dir / "validation.json", nlohmann::json(outcome.report).dump(2) + "\n");
    return outcome;
}

std::string summary_text(const ExperimentConfig& config, const ProblemInstance& problem, const Trajectory& traj) {
    const auto& last = traj.back();
    std::string s;
    s += fmt::format("status: ok\n");
    s += fmt::format("problem: {}\n", problem.name());
    s += fmt::format("schedule: {}\n", describe_schedule(config.schedule));
    s += fmt::format("method: {}\n", to_string(config.integrator.method));
    s += fmt::format("step: {}\n", format_number(config.integrator.step));
    s += fmt::format("t_end: {}\n", format_number(config.integrator.t_end));
    s += fmt::format("samples: {}\n", traj.size());
    s += fmt::format("final_t: {}\n", format_number(last.t));
    s += fmt::format("final_norm_x: {}\n", format_number(last.x.norm()));
    s += fmt::format("final_residual_fp: {}\n", format_number(last.residual_fp));
    s += fmt::format("final_feasibility_gap: {}\n", format_number(last.feasibility_gap));
    if (last.dist_oracle) s += fmt::format("final_dist_oracle: {}\n", format_number(*last.dist_oracle));
    return s;
}

}  // namespace

int cmd_validate(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    prepare_output(config);
    const ProblemInstance problem = build_problem(config.problem);
    const Schedule schedule = build_schedule(config.schedule, problem);
    return validate_and_report(config, problem, schedule, out, err).status;
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    prepare_output(config);
    const ProblemInstance problem = build_problem(config.problem);
    const Schedule schedule = build_schedule(config.schedule, problem);
    {
        std::ostringstream report;
        const int status = validate_and_report(config, problem, schedule, report, err).status;
        if (status != kSuccess) {
            out << report.str();
            return status;
        }
    }

    IntegratorConfig ic;
    ic.method = config.integrator.method;
    ic.t_end = config.integrator.t_end;
    ic.step = config.integrator.step;
    ic.record_stride = config.integrator.record_stride;
    ic.initial_point = build_initial_point(config.integrator, problem.dim());

    Trajectory traj;
    try {
        traj = integrate(problem, schedule, ic);
    } catch (const DivergenceError& e) {
        const std::string summary = fmt::format("status: diverged\nproblem: {}\nschedule: {}\nlast_finite_t: {}\n",
                                                problem.name(), describe_schedule(config.schedule),
                                                format_number(e.last_finite_t()));
        write_file(config.output_dir / "summary.txt", summary);
        fmt::print(err, "error: {}\n", e.what());
        return kDivergence;
    } catch (const PreconditionError& e) {
        fmt::print(err, "error: schedule precondition violated during integration: {}\n", e.what());
        return kScheduleInvalid;
    }

    if (config.oracle.attach_oracle_distance) {
        try {
            traj = attach_oracle_distance(std::move(traj), oracle_path(problem, traj, config.oracle.tol));
        } catch (const NonConvergenceError& e) {
            fmt::print(err, "error: oracle failed: {}\n", e.what());
            return kOracleFailure;
        }
    }

    std::vector<double> ts, residual, gap;
    for (const auto& s : traj.samples) {
        ts.push_back(s.t);
        residual.push_back(s.residual_fp);
        gap.push_back(s.feasibility_gap);
    }
    write_file(config.output_dir / "trajectory.csv", trajectory_csv(traj));
    const std::string summary = summary_text(config, problem, traj);
    write_file(config.output_dir / "summary.txt", summary);
    write_file(config.output_dir / "residual.svg",
               log_line_chart_svg(ts, residual, "fixed-point residual ||x(t) - p(t)||", "t", "residual"));
    write_file(config.output_dir / "gap.svg",
               log_line_chart_svg(ts, gap, "feasibility gap ||B(x(t))||", "t", "gap"));
    out << summary;
    return kSuccess;
}

std::vector<std::pair<ParameterPoint, ParameterPoint>> sample_parameter_pairs(const OracleSettings& s) {
    std::vector<std::pair<ParameterPoint, ParameterPoint>> pairs;
    const ParameterPoint anchor{s.eps_hi, std::max(s.beta_lo, 1e-12)};
    pairs.emplace_back(anchor, anchor);
    Rng rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        if (lo <= 0.0) return lo + (hi - lo) * unit(rng);
        return lo * std::pow(hi / lo, unit(rng));
    };
    for (int k = 0; k < s.pairs; ++k) {
        ParameterPoint a{log_uniform(s.eps_lo, s.eps_hi), log_uniform(s.beta_lo, s.beta_hi)};
        ParameterPoint b{log_uniform(s.eps_lo, s.eps_hi), log_uniform(s.beta_lo, s.beta_hi)};
        pairs.emplace_back(a, b);
    }
    return pairs;
}

int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    prepare_output(config);
    const ProblemInstance problem = build_problem(config.problem);
    const auto& oc = config.oracle;
    bool ok = true;
    try {
        if (oc.verify_prop1) {
            FeasibilityDecayOptions options;
            options.sequence = ParameterSequence::geometric(oc.rho);
            options.n_max = oc.n_max;
            options.decay_target = oc.decay_target;
            options.inner_tol = oc.tol * 1e-2;
            const FeasibilityDecayReport report = verify_feasibility_decay(problem, options);
            std::string csv = "n,eps_n,beta_n,norm_xbar,norm_B_xbar\n";
            for (const auto& row : report.rows) {
                csv += fmt::format("{},{},{},{},{}\n", row.n, format_number(row.eps), format_number(row.beta),
                                   format_number(row.norm_xbar), format_number(row.norm_B_xbar));
            }
            write_file(config.output_dir / "prop1.csv", csv);
            fmt::print(out, "prop1: verdict {} (monotone decay: {}, final ||B(x_bar)|| = {:.3e}, target {:.1e}{})\n",
                       to_string(report.verdict), report.monotone ? "yes" : "no",
                       report.rows.back().norm_B_xbar, oc.decay_target,
                       report.inequality_checked
                           ? fmt::format(", squared-gap bound {}", report.inequality_holds ? "holds" : "VIOLATED")
                           : std::string());
            ok = ok && report.decay_observed() && report.inequality_holds;
        }
        if (oc.verify_prop2) {
            const auto pairs = sample_parameter_pairs(oc);
            const SolutionMapReport report = verify_solution_map_lipschitz(problem, pairs, oc.tol);
            std::string csv = "pair,lhs,rhs,margin\n";
            for (std::size_t i = 0; i < report.pairs.size(); ++i) {
                const auto& p = report.pairs[i];
                csv += fmt::format("{},{},{},{}\n", i, format_number(p.lhs), format_number(p.rhs),
                                   format_number(p.margin));
            }
            write_file(config.output_dir / "prop2.csv", csv);
            const bool margins_ok = std::all_of(report.pairs.begin(), report.pairs.end(),
                                                [](const LipschitzPairRecord& p) { return p.margin >= -1e-6; });
            fmt::print(out, "prop2: {} pairs, a_hat = {:.6g}, ell_hat = {:.6g}, worst margin = {:.3e} ({})\n",
                       report.pairs.size(), report.a_hat, report.ell_hat, report.worst_margin(),
                       margins_ok ? "pass" : "FAIL");
            ok = ok && margins_ok;
        }
    } catch (const NonConvergenceError& e) {
        fmt::print(err, "error: oracle did not converge: {}\n", e.what());
        return kOracleFailure;
    }
    return ok ? kSuccess : kOracleFailure;
}

int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream&) {
    prepare_output(config);
    const auto& sw = config.sweep;
    auto row_block = [&sw](int i) {
        const double q = i * sw.q_max / sw.n_q;
        std::string block;
        for (int j = 1; j <= sw.n_r; ++j) {
            const double r = j * sw.r_max / sw.n_r;
            const ValidationReport rep = check_power_law_conditions(q, r);
            auto flag = [](bool b) { return b ? "true" : "false"; };
            block += fmt::format("{},{},{},{},{},{}\n", format_number(q), format_number(r),
                                 flag(rep.conditions[0].passed), flag(rep.conditions[1].passed),
                                 flag(rep.conditions[2].passed), flag(rep.passed()));
        }
        return block;
    };

    // Rows are independent; blocks of q values are evaluated concurrently and
    // concatenated in grid order.
    const int workers = static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
    std::vector<std::future<std::string>> futures;
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            std::string chunk;
            const int begin = 1 + w * sw.n_q / workers, end = 1 + (w + 1) * sw.n_q / workers;
            for (int i = begin; i < end; ++i) chunk += row_block(i);
            return chunk;
        }));
    }
    std::string csv = std::string(kRegionHeader) + "\n";
    for (auto& f : futures) csv += f.get();
    write_file(config.output_dir / "region.csv", csv);

    std::size_t n_feasible = 0, pos = 0;
    while ((pos = csv.find(",true\n", pos)) != std::string::npos) {
        ++n_feasible;
        ++pos;
    }
    fmt::print(out, "sweep: {} x {} grid over (0, {}] x (0, {}], {} feasible points\n", sw.n_q, sw.n_r, sw.q_max,
               sw.r_max, n_feasible);
    return kSuccess;
}

}  // namespace tsengflow::cli
