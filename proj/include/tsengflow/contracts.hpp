#pragma once

#include "tsengflow/operators.hpp"

#include <string>
#include <vector>

namespace tsengflow {

/// Sampling setup for the operator contract checks. Pairs are standard
/// Gaussian vectors scaled by radii cycling through {1, 10, 100}.
///
/// An inequality lhs <= rhs counts as violated when
/// lhs - rhs > slack * (1 + |lhs| + |rhs|); the absolute part alone would be
/// below binary64 resolution at radius 100.
struct SamplingOptions {
    int pairs = 100;
    std::uint64_t seed = 2024;
    double slack = 1e-12;
};

struct ContractCheck {
    std::string property;
    int samples = 0;
    int violations = 0;
    /// min over samples of (rhs - lhs); negative means a violation candidate.
    double worst_margin = 0.0;

    bool passed() const noexcept { return violations == 0; }
};

struct ContractReport {
    std::string subject;
    std::vector<ContractCheck> checks;

    bool passed() const noexcept;
    std::string to_text() const;
};

ContractCheck check_firm_nonexpansive(const ResolventOperator& J, Index dim, double lambda,
                                      const SamplingOptions& opts = {});
ContractCheck check_monotone(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts = {});
ContractCheck check_lipschitz(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts = {});
/// Requires F.cocoercivity().
ContractCheck check_cocoercive(const LipschitzMonotoneMap& F, Index dim, const SamplingOptions& opts = {});

/// <V(x)-V(y), x-y> >= eps ||x-y||^2 for V = V_{eps,beta}.
ContractCheck check_strong_monotone_V(const ProblemInstance& problem, double eps, double beta,
                                      const SamplingOptions& opts = {});
/// ||V(x)-V(y)|| <= L_{eps,beta} ||x-y||.
ContractCheck check_lipschitz_V(const ProblemInstance& problem, double eps, double beta,
                                const SamplingOptions& opts = {});

/// Every check above on one instance: resolvent at lambda in {0.1, 1, 10},
/// D and B monotone/Lipschitz, B cocoercive, V at a few (eps, beta).
ContractReport check_problem_contracts(const ProblemInstance& problem, const SamplingOptions& opts = {});

}  // namespace tsengflow
