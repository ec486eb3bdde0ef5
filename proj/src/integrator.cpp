#include "tsengflow/integrator.hpp"

#include "tsengflow/dynamics.hpp"

#include <fmt/format.h>

#include <cmath>

namespace tsengflow {

std::string to_string(Method method) { return method == Method::Euler ? "euler" : "rk4"; }

Method method_from_string(std::string_view name) {
    if (name == "euler") return Method::Euler;
    if (name == "rk4") return Method::RK4;
    throw ContractError(fmt::format("unknown integration method '{}' (expected euler or rk4)", name));
}

namespace {

constexpr double kDivergenceNorm = 1e12;

TrajectorySample record(const ProblemInstance& problem, const Schedule& schedule, double t, const Vector& x) {
    const FieldEvaluation f = tseng_field(problem, schedule, t, x);
    TrajectorySample s;
    s.t = t;
    s.x = x;
    s.residual_fp = f.residual_fp;
    s.feasibility_gap = problem.B()(x).norm();
    s.eps = f.eps_used;
    s.beta = f.beta_used;
    s.lambda = f.lambda_used;
    return s;
}

bool diverged(const Vector& x) { return !x.allFinite() || x.norm() > kDivergenceNorm; }

}  // namespace

Trajectory integrate(const ProblemInstance& problem, const Schedule& schedule, const IntegratorConfig& config) {
    if (!(config.t_end > 0.0) || !(config.step > 0.0) || !(config.step < config.t_end)) {
        throw ContractError(
            fmt::format("integrate: need 0 < step < t_end (step = {}, t_end = {})", config.step, config.t_end));
    }
    if (config.record_stride < 1) throw ContractError("integrate: record_stride must be >= 1");
    require_dim(config.initial_point, problem.dim(), "integrate initial point");
    require_finite(config.initial_point, "integrate initial point");

    auto f = [&](double t, const Vector& x) { return tseng_field(problem, schedule, t, x).xdot; };

    const auto steps = static_cast<long>(std::ceil(config.t_end / config.step - 1e-9));
    Trajectory traj;
    traj.samples.reserve(static_cast<std::size_t>(steps / config.record_stride + 2));
    Vector x = config.initial_point;
    traj.samples.push_back(record(problem, schedule, 0.0, x));

    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        const double t_next = (k + 1 == steps) ? config.t_end : static_cast<double>(k + 1) * config.step;
        const double h = t_next - t;
        if (config.method == Method::Euler) {
            x += h * f(t, x);
        } else {
            const Vector k1 = f(t, x);
            const Vector k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
            const Vector k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
            const Vector k4 = f(t_next, x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if (diverged(x)) {
            throw DivergenceError(fmt::format("integrate: state diverged after t = {}", t), t);
        }
        t = t_next;
        if ((k + 1) % config.record_stride == 0 || k + 1 == steps) {
            traj.samples.push_back(record(problem, schedule, t, x));
        }
    }
    return traj;
}

Trajectory attach_oracle_distance(Trajectory trajectory, std::span<const AuxiliarySolution> solutions) {
    if (solutions.size() != trajectory.samples.size()) {
        throw ContractError(fmt::format("attach_oracle_distance: {} solutions for {} samples", solutions.size(),
                                        trajectory.samples.size()));
    }
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        auto& s = trajectory.samples[i];
        require_dim(solutions[i].x_bar, s.x.size(), "attach_oracle_distance");
        s.dist_oracle = (s.x - solutions[i].x_bar).norm();
    }
    return trajectory;
}

std::vector<AuxiliarySolution> oracle_path(const ProblemInstance& problem, const Trajectory& trajectory,
                                           double tol) {
    std::vector<AuxiliarySolution> out;
    out.reserve(trajectory.samples.size());
    AuxiliaryOptions options;
    options.tol = tol;
    for (const auto& s : trajectory.samples) {
        out.push_back(solve_auxiliary(problem, s.eps, s.beta, options));
        options.warm_start = out.back().x_bar;
    }
    return out;
}

}  // namespace tsengflow
