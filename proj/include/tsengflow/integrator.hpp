#pragma once

#include "tsengflow/oracle.hpp"
#include "tsengflow/operators.hpp"
#include "tsengflow/schedules.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tsengflow {

enum class Method { Euler, RK4 };

std::string to_string(Method method);
Method method_from_string(std::string_view name);

struct IntegratorConfig {
    Method method = Method::RK4;
    double t_end = 1.0;
    double step = 0.01;
    int record_stride = 1;
    Vector initial_point;
};

struct TrajectorySample {
    double t = 0.0;
    Vector x;
    double residual_fp = 0.0;      // ||x - p||
    double feasibility_gap = 0.0;  // ||B(x)||
    double eps = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    std::optional<double> dist_oracle;  // ||x - x_bar(eps, beta)||
};

struct Trajectory {
    std::vector<TrajectorySample> samples;

    const TrajectorySample& back() const { return samples.back(); }
    std::size_t size() const noexcept { return samples.size(); }
};

/// Fixed-step explicit integration of xdot = f(t, x). Records t = 0, every
/// record_stride-th step and the final step. Steps are placed at k * step;
/// the last step is shortened to land on t_end.
///
/// Throws DivergenceError when the state stops being finite or its norm
/// exceeds 1e12, and PreconditionError when lambda(t) L(t) >= 1 at a stage.
Trajectory integrate(const ProblemInstance& problem, const Schedule& schedule, const IntegratorConfig& config);

/// One auxiliary solution per recorded sample, in order.
Trajectory attach_oracle_distance(Trajectory trajectory, std::span<const AuxiliarySolution> solutions);

/// Solves the auxiliary problem at every recorded (eps, beta), warm-starting
/// each solve from the previous one.
std::vector<AuxiliarySolution> oracle_path(const ProblemInstance& problem, const Trajectory& trajectory,
                                           double tol);

}  // namespace tsengflow
