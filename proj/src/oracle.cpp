#include "tsengflow/oracle.hpp"

#include "tsengflow/dynamics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsengflow {

AuxiliarySolution solve_auxiliary(const ProblemInstance& problem, double eps, double beta,
                                  const AuxiliaryOptions& options) {
    if (!(eps > 0.0)) throw ContractError(fmt::format("solve_auxiliary: eps must be > 0, got {}", eps));
    if (!(beta >= 0.0)) throw ContractError(fmt::format("solve_auxiliary: beta must be >= 0, got {}", beta));
    if (!(options.tol > 0.0) || options.max_iter < 1) {
        throw ContractError("solve_auxiliary: tol must be > 0 and max_iter >= 1");
    }
    const double L = lipschitz_modulus(problem.eta(), problem.mu(), eps, beta);
    const FieldParameters params{options.sigma / L, eps, beta};

    Vector x = options.warm_start ? *options.warm_start : Vector::Zero(problem.dim());
    require_dim(x, problem.dim(), "solve_auxiliary warm start");
    double best = std::numeric_limits<double>::infinity();
    for (long k = 0; k < options.max_iter; ++k) {
        FieldEvaluation step = tseng_step(problem, params, x);
        if (!step.xdot.allFinite()) {
            throw NonConvergenceError("solve_auxiliary: iterate became non-finite", best, k);
        }
        best = std::min(best, step.residual_fp);
        if (step.residual_fp <= options.tol * std::max(1.0, x.norm())) {
            const double certificate = step.xdot.norm() / params.lambda;
            return AuxiliarySolution{eps, beta, std::move(step.p), step.residual_fp, k, certificate};
        }
        x += step.xdot;
    }
    throw NonConvergenceError(fmt::format("solve_auxiliary(eps={}, beta={}): no convergence in {} iterations "
                                          "(best residual {:.3e})",
                                          eps, beta, options.max_iter, best),
                              best, options.max_iter);
}

AuxiliarySolution solve_auxiliary(const ProblemInstance& problem, double eps, double beta, double tol,
                                  long max_iter) {
    AuxiliaryOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    return solve_auxiliary(problem, eps, beta, options);
}

double ParameterSequence::eps(int n) const { return eps0 * std::pow(eps_ratio, n); }
double ParameterSequence::beta(int n) const { return beta0 * std::pow(beta_ratio, n); }

LeastNormResult least_norm_path(const ProblemInstance& problem, double tol, const LeastNormOptions& options) {
    if (!(tol > 0.0)) throw ContractError("least_norm_solution: tol must be > 0");
    if (!(options.rho > 0.0 && options.rho < 1.0)) throw ContractError("least_norm_solution: rho must be in (0,1)");
    const auto seq = ParameterSequence::geometric(options.rho);
    AuxiliaryOptions inner;
    inner.tol = tol * options.inner_tol_factor;
    inner.max_iter = options.inner_max_iter;

    LeastNormResult result;
    for (int n = 0; n <= options.max_n; ++n) {
        const double eps = seq.eps(n), beta = seq.beta(n);
        AuxiliarySolution sol = solve_auxiliary(problem, eps, beta, inner);
        ContinuationStep step;
        step.n = n;
        step.eps = eps;
        step.beta = beta;
        step.norm_B = problem.B()(sol.x_bar).norm();
        step.iterations = sol.iterations;
        step.x_bar = std::move(sol.x_bar);
        inner.warm_start = step.x_bar;
        const bool done = !result.path.empty() && (step.x_bar - result.path.back().x_bar).norm() <= tol;
        result.path.push_back(std::move(step));
        if (done) {
            result.x = result.path.back().x_bar;
            return result;
        }
    }
    const double last_change =
        result.path.size() >= 2 ? (result.path.back().x_bar - result.path[result.path.size() - 2].x_bar).norm()
                                : std::numeric_limits<double>::infinity();
    throw NonConvergenceError(
        fmt::format("least_norm_solution: no convergence after n = {} (last change {:.3e})", options.max_n, last_change),
        last_change, options.max_n);
}

Vector least_norm_solution(const ProblemInstance& problem, double tol, double rho) {
    LeastNormOptions options;
    options.rho = rho;
    return least_norm_path(problem, tol, options).x;
}

// ---------------------------------------------------------------------------

double SolutionMapReport::worst_margin() const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) worst = std::min(worst, p.margin);
    return worst;
}

bool SolutionMapReport::passed() const {
    return std::all_of(pairs.begin(), pairs.end(), [this](const auto& p) { return p.margin >= -10.0 * tol; });
}

double estimate_ell(const ProblemInstance& problem, double a, int directions, std::uint64_t seed) {
    if (!(a >= 0.0)) throw ContractError("estimate_ell: radius must be >= 0");
    double sup_b = problem.B()(Vector::Zero(problem.dim())).norm();
    Rng rng(seed);
    for (int k = 0; k < directions && a > 0.0; ++k) {
        Vector u = gaussian_vector(problem.dim(), rng);
        const double nu = u.norm();
        if (nu == 0.0) continue;
        u *= a / nu;
        sup_b = std::max(sup_b, problem.B()(u).norm());
    }
    return std::max(sup_b, a);
}

SolutionMapReport verify_solution_map_lipschitz(const ProblemInstance& problem,
                                                const std::vector<std::pair<ParameterPoint, ParameterPoint>>& pairs,
                                                double tol, const SolutionMapOptions& options) {
    if (!(tol > 0.0)) throw ContractError("verify_solution_map_lipschitz: tol must be > 0");
    for (const auto& [p1, p2] : pairs) {
        if (!(p1.eps > 0.0) || !(p2.eps > 0.0)) {
            throw ContractError("verify_solution_map_lipschitz: every eps must be > 0");
        }
    }
    SolutionMapReport report;
    report.tol = tol;
    const double a = options.known_a ? *options.known_a : least_norm_solution(problem, tol).norm();
    report.a_hat = a + tol;
    report.ell_hat = estimate_ell(problem, report.a_hat, options.directions, options.seed);

    AuxiliaryOptions inner;
    inner.tol = tol * 1e-2;
    for (const auto& [p1, p2] : pairs) {
        const Vector x1 = solve_auxiliary(problem, p1.eps, p1.beta, inner).x_bar;
        Vector x2 = x1;
        if (p1.eps != p2.eps || p1.beta != p2.beta) {
            AuxiliaryOptions second = inner;
            second.warm_start = x1;
            x2 = solve_auxiliary(problem, p2.eps, p2.beta, second).x_bar;
        }
        LipschitzPairRecord rec;
        rec.first = p1;
        rec.second = p2;
        rec.lhs = (x2 - x1).norm();
        rec.rhs = report.ell_hat / p1.eps * (std::abs(p2.beta - p1.beta) + std::abs(p2.eps - p1.eps));
        rec.margin = rec.rhs - rec.lhs;
        report.pairs.push_back(rec);
    }
    return report;
}

// ---------------------------------------------------------------------------

std::string to_string(DecayVerdict verdict) {
    switch (verdict) {
        case DecayVerdict::Pass: return "pass";
        case DecayVerdict::Fail: return "fail";
        case DecayVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

FeasibilityDecayReport verify_feasibility_decay(const ProblemInstance& problem,
                                                const FeasibilityDecayOptions& options) {
    const auto& seq = options.sequence;
    if (!(seq.eps0 > 0.0) || !(seq.beta0 > 0.0) || !(seq.eps_ratio > 0.0) || !(seq.beta_ratio > 0.0)) {
        throw ContractError("verify_feasibility_decay: sequence parameters must be positive");
    }
    if (options.n_max < 1) throw ContractError("verify_feasibility_decay: n_max must be >= 1");

    std::optional<Vector> z = options.feasible_point;
    if (!z && problem.known() && problem.known()->least_norm) z = problem.known()->least_norm;
    std::optional<double> xi = options.xi_bound;
    if (!xi && problem.known()) xi = problem.known()->normal_cone_bound;

    FeasibilityDecayReport report;
    report.hypothesis_met = seq.eps_ratio < 1.0 && seq.beta_ratio > 1.0;
    report.inequality_checked = z.has_value() && xi.has_value();
    const double gamma = problem.gamma();

    AuxiliaryOptions inner;
    inner.tol = options.inner_tol;
    inner.max_iter = options.inner_max_iter;
    for (int n = 0; n <= options.n_max; ++n) {
        FeasibilityDecayRow row;
        row.n = n;
        row.eps = seq.eps(n);
        row.beta = seq.beta(n);
        const AuxiliarySolution sol = solve_auxiliary(problem, row.eps, row.beta, inner);
        inner.warm_start = sol.x_bar;
        row.norm_xbar = sol.x_bar.norm();
        row.norm_B_xbar = problem.B()(sol.x_bar).norm();
        if (report.inequality_checked) {
            const double dist = (*z - sol.x_bar).norm();
            row.bound = row.eps / (gamma * row.beta) * row.norm_xbar * dist + *xi / (gamma * row.beta) * dist;
            const double lhs = row.norm_B_xbar * row.norm_B_xbar;
            // The certificate term accounts for x_bar being an approximate zero.
            const double slack = sol.certificate * dist / (gamma * row.beta) +
                                 options.inequality_slack * (1.0 + lhs + *row.bound);
            row.bound_holds = lhs <= *row.bound + slack;
            report.inequality_holds = report.inequality_holds && row.bound_holds;
        }
        report.rows.push_back(row);
    }

    report.monotone = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const double prev = report.rows[i - 1].norm_B_xbar, cur = report.rows[i].norm_B_xbar;
        if (cur > prev + 1e-12 * (1.0 + prev)) report.monotone = false;
    }
    report.reached_target = report.rows.back().norm_B_xbar <= options.decay_target;

    if (!report.hypothesis_met) {
        report.verdict = DecayVerdict::Inconclusive;
    } else if (report.decay_observed() && report.inequality_holds) {
        report.verdict = DecayVerdict::Pass;
    } else {
        report.verdict = DecayVerdict::Fail;
    }
    return report;
}

}  // namespace tsengflow
