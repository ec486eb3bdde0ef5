#include "tsengflow/contracts.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace tsengflow {
namespace {

constexpr std::array<double, 3> kRadii{1.0, 10.0, 100.0};

// `sides(x, y)` returns {rhs, lhs} of an inequality lhs <= rhs.
ContractCheck run_pairs(std::string property, Index dim, const SamplingOptions& opts,
                        const std::function<std::pair<double, double>(const Vector&, const Vector&)>& sides) {
    ContractCheck check;
    check.property = std::move(property);
    check.worst_margin = std::numeric_limits<double>::infinity();
    Rng rng(opts.seed);
    for (int k = 0; k < opts.pairs; ++k) {
        const double radius = kRadii[static_cast<std::size_t>(k) % kRadii.size()];
        const Vector x = radius * gaussian_vector(dim, rng);
        const Vector y = radius * gaussian_vector(dim, rng);
        const auto [rhs, lhs] = sides(x, y);
        const double margin = rhs - lhs;
        check.worst_margin = std::min(check.worst_margin, margin);
        ++check.samples;
        if (-margin > opts.slack * (1.0 + std::abs(lhs) + std::abs(rhs))) ++check.violations;
    }
    return check;
}

}  // namespace

bool ContractReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const ContractCheck& c) { return c.passed(); });
}

std::string ContractReport::to_text() const {
    std::string out = fmt::format("contracts for {}: {}\n", subject, passed() ? "PASS" : "FAIL");
    for (const auto& c : checks) {
        out += fmt::format("  [{}] {} ({} samples, {} violations, worst margin {:.3e})\n",
                           c.passed() ? "ok" : "!!", c.property, c.samples, c.violations, c.worst_margin);
    }
    return out;
}

ContractCheck check_firm_nonexpansive(const ResolventOperator& J, Index dim, double lambda,
                                      const SamplingOptions& opts) {
    return run_pairs(fmt::format("firm nonexpansiveness of {} (lambda={})", J.label(), lambda), dim, opts,
                     [&](const Vector& x, const Vector& y) {
                         const Vector d = J.apply(lambda, x) - J.apply(lambda, y);
                         return std::pair{(x - y).dot(d), d.squaredNorm()};
                     });
}

ContractCheck check_monotone(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts) {
    return run_pairs(fmt::format("monotonicity of {}", F.label()), dim, opts,
                     [&](const Vector& x, const Vector& y) {
                         return std::pair{(F(x) - F(y)).dot(x - y), 0.0};
                     });
}

ContractCheck check_lipschitz(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts) {
    const double lip = F.lipschitz_constant();
    return run_pairs(fmt::format("Lipschitz bound {} of {}", lip, F.label()), dim, opts,
                     [&](const Vector& x, const Vector& y) {
                         return std::pair{lip * (x - y).norm(), (F(x) - F(y)).norm()};
                     });
}

ContractCheck check_cocoercive(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts) {
    if (!F.cocoercivity()) throw ContractError(fmt::format("{} carries no cocoercivity constant", F.label()));
    const double gamma = *F.cocoercivity();
    return run_pairs(fmt::format("cocoercivity {} of {}", gamma, F.label()), dim, opts,
                     [&](const Vector& x, const Vector& y) {
                         const Vector d = F(x) - F(y);
                         return std::pair{d.dot(x - y), gamma * d.squaredNorm()};
                     });
}

ContractCheck check_strong_monotone_V(const ProblemInstance& problem, double eps, double beta,
                                      const SamplingOptions& opts) {
    return run_pairs(fmt::format("strong monotonicity of V(eps={}, beta={})", eps, beta), problem.dim(), opts,
                     [&](const Vector& x, const Vector& y) {
                         const Vector d = eval_V(problem, eps, beta, x) - eval_V(problem, eps, beta, y);
                         return std::pair{d.dot(x - y), eps * (x - y).squaredNorm()};
                     });
}

ContractCheck check_lipschitz_V(const ProblemInstance& problem, double eps, double beta,
                                const SamplingOptions& opts) {
    const double L = lipschitz_modulus(problem.eta(), problem.mu(), eps, beta);
    return run_pairs(fmt::format("Lipschitz modulus {} of V(eps={}, beta={})", L, eps, beta), problem.dim(),
                     opts, [&](const Vector& x, const Vector& y) {
                         const Vector d = eval_V(problem, eps, beta, x) - eval_V(problem, eps, beta, y);
                         return std::pair{L * (x - y).norm(), d.norm()};
                     });
}

ContractReport check_problem_contracts(const ProblemInstance& problem, const SamplingOptions& opts) {
    ContractReport report;
    report.subject = problem.name();
    const Index n = problem.dim();
    SamplingOptions o = opts;
    auto next = [&o]() -> const SamplingOptions& {
        ++o.seed;
        return o;
    };
    for (double lambda : {0.1, 1.0, 10.0}) {
        report.checks.push_back(check_firm_nonexpansive(problem.A(), n, lambda, next()));
    }
    report.checks.push_back(check_monotone(problem.D(), n, next()));
    report.checks.push_back(check_lipschitz(problem.D(), n, next()));
    report.checks.push_back(check_monotone(problem.B(), n, next()));
    report.checks.push_back(check_lipschitz(problem.B(), n, next()));
    report.checks.push_back(check_cocoercive(problem.B(), n, next()));
    for (auto [eps, beta] : {std::pair{1.0, 1.0}, std::pair{0.1, 10.0}, std::pair{1e-3, 100.0}}) {
        report.checks.push_back(check_strong_monotone_V(problem, eps, beta, next()));
        report.checks.push_back(check_lipschitz_V(problem, eps, beta, next()));
    }
    return report;
}

}  // namespace tsengflow
