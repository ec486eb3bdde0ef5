#pragma once

#include "tsengflow/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tsengflow {

/// The unique zero x_bar(eps, beta) of A + V_{eps,beta}.
struct AuxiliarySolution {
    double eps = 0.0;
    double beta = 0.0;
    Vector x_bar;
    double residual = 0.0;  // fixed-point residual ||x - p|| at termination
    long iterations = 0;
    // Norm of an explicit element of (A + D + eps Id + beta B)(x_bar).
    double certificate = 0.0;
};

struct AuxiliaryOptions {
    double tol = 1e-10;
    long max_iter = 5'000'000;
    double sigma = 0.5;                  // lambda = sigma / L_{eps,beta}
    std::optional<Vector> warm_start;    // defaults to the origin
};

/// Iterates the frozen-parameter Tseng step x <- p - lambda (V(p) - V(x))
/// until ||x - p|| <= tol max(1, ||x||), then returns p.
/// Throws NonConvergenceError carrying the best residual.
AuxiliarySolution solve_auxiliary(const ProblemInstance& problem, double eps, double beta,
                                  const AuxiliaryOptions& options = {});
AuxiliarySolution solve_auxiliary(const ProblemInstance& problem, double eps, double beta, double tol,
                                  long max_iter);

/// Geometric parameter path eps_n = eps0 * eps_ratio^n, beta_n = beta0 * beta_ratio^n.
struct ParameterSequence {
    double eps0 = 1.0;
    double beta0 = 1.0;
    double eps_ratio = 0.5;
    double beta_ratio = 2.0;

    static ParameterSequence geometric(double rho) { return {1.0, 1.0, rho, 1.0 / rho}; }

    double eps(int n) const;
    double beta(int n) const;
};

struct ContinuationStep {
    int n = 0;
    double eps = 0.0;
    double beta = 0.0;
    Vector x_bar;
    double norm_B = 0.0;  // ||B(x_bar)||
    long iterations = 0;
};

struct LeastNormResult {
    Vector x;
    std::vector<ContinuationStep> path;
};

struct LeastNormOptions {
    double rho = 0.5;
    int max_n = 60;
    /// Inner tolerance relative to the outer one.
    double inner_tol_factor = 1e-3;
    long inner_max_iter = 5'000'000;
};

/// Follows eps_n -> 0, beta_n -> inf with warm starts until consecutive
/// solutions differ by at most tol. Throws NonConvergenceError past max_n.
LeastNormResult least_norm_path(const ProblemInstance& problem, double tol, const LeastNormOptions& options = {});
Vector least_norm_solution(const ProblemInstance& problem, double tol, double rho = 0.5);

struct ParameterPoint {
    double eps;
    double beta;
};

struct LipschitzPairRecord {
    ParameterPoint first{};
    ParameterPoint second{};
    double lhs = 0.0;     // ||x_bar(t2) - x_bar(t1)||
    double rhs = 0.0;     // (ell / eps1) (|d beta| + |d eps|)
    double margin = 0.0;  // rhs - lhs
};

struct SolutionMapReport {
    double a_hat = 0.0;    // ||least-norm solution|| + tol
    double ell_hat = 0.0;  // max{sampled sup ||B|| on the ball of radius a_hat, a_hat}
    std::vector<LipschitzPairRecord> pairs;
    double tol = 0.0;

    double worst_margin() const;
    /// Fails if any margin < -10 tol.
    bool passed() const;
};

struct SolutionMapOptions {
    int directions = 128;
    std::uint64_t seed = 97;
    /// Skips the least-norm computation when the caller knows ||Pi_{zer Phi}(0)||.
    std::optional<double> known_a;
};

/// ell sampled over the sphere of radius a (plus the centre).
double estimate_ell(const ProblemInstance& problem, double a, int directions, std::uint64_t seed);

SolutionMapReport verify_solution_map_lipschitz(const ProblemInstance& problem,
                                                const std::vector<std::pair<ParameterPoint, ParameterPoint>>& pairs,
                                                double tol, const SolutionMapOptions& options = {});

enum class DecayVerdict { Pass, Fail, Inconclusive };
std::string to_string(DecayVerdict verdict);

struct FeasibilityDecayRow {
    int n = 0;
    double eps = 0.0;
    double beta = 0.0;
    double norm_xbar = 0.0;
    double norm_B_xbar = 0.0;
    std::optional<double> bound;  // right side of the squared-gap inequality
    bool bound_holds = true;
};

struct FeasibilityDecayReport {
    std::vector<FeasibilityDecayRow> rows;
    bool monotone = false;        // norm_B_xbar nonincreasing
    bool reached_target = false;  // last norm_B_xbar <= decay_target
    bool inequality_checked = false;
    bool inequality_holds = true;
    bool hypothesis_met = true;   // eps_n -> 0 and beta_n -> inf
    DecayVerdict verdict = DecayVerdict::Fail;

    bool decay_observed() const noexcept { return monotone && reached_target; }
};

struct FeasibilityDecayOptions {
    ParameterSequence sequence = ParameterSequence::geometric(0.5);
    int n_max = 20;
    double decay_target = 1e-6;
    double inner_tol = 1e-12;
    long inner_max_iter = 5'000'000;
    /// A point z in zer(Phi); defaults to the known least-norm solution.
    std::optional<Vector> feasible_point;
    /// Norm bound for the normal-cone element at z; without it only the plain
    /// decay is checked.
    std::optional<double> xi_bound;
    double inequality_slack = 1e-12;  // relative
};

/// ||B(x_bar_n)|| along the parameter sequence, plus the squared-gap bound
/// ||B(x_bar_n)||^2 <= eps_n/(gamma beta_n) ||x_bar_n|| ||z - x_bar_n||
///                     + xi_bound/(gamma beta_n) ||x_bar_n - z||
/// when z and xi_bound are available.
FeasibilityDecayReport verify_feasibility_decay(const ProblemInstance& problem,
                                                const FeasibilityDecayOptions& options = {});

}  // namespace tsengflow
