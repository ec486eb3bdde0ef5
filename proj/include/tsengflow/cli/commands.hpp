#pragma once

#include "tsengflow/cli/config.hpp"
#include "tsengflow/oracle.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace tsengflow::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigError = 1,
    kScheduleInvalid = 2,
    kDivergence = 3,
    kOracleFailure = 4,
};

/// Validates the schedule against the convergence hypotheses. Writes the
/// report to `out` and to <output_dir>/validation.txt (plus validation.json).
int cmd_validate(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Validates, integrates and writes trajectory.csv, summary.txt, residual.svg
/// and gap.svg.
int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Least-norm consistency and solution-map Lipschitz checks; writes prop1.csv
/// and prop2.csv.
int cmd_oracle(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Evaluates the power-law feasibility conditions on a (q, r) grid; writes
/// region.csv.
int cmd_sweep(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// The (eps, beta) pairs used by cmd_oracle: one identical pair followed by
/// settings.pairs seeded pairs, log-uniform on the configured ranges.
std::vector<std::pair<ParameterPoint, ParameterPoint>> sample_parameter_pairs(const OracleSettings& settings);

/// Header of region.csv.
inline constexpr const char* kRegionHeader =
    "q,r,two_q_plus_r_lt_half,two_r_plus_three_q_lt_one,two_q_plus_r_le_third,feasible";

}  // namespace tsengflow::cli
