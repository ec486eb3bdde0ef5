#pragma once

#include "tsengflow/common.hpp"

#include <nlohmann/json_fwd.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tsengflow {

enum class ScheduleKind { PowerLaw, Constant, Custom };

std::string to_string(ScheduleKind kind);

struct PowerLawParams {
    double b = 1.0;
    double q = 0.1;
    double r = 0.1;
    double sigma = 0.5;
};

/// One row of a tabulated schedule; values are interpolated linearly in t.
struct ScheduleKnot {
    double t;
    double eps;
    double beta;
};

/// Time-varying parameters eps(t) (Tikhonov), beta(t) (penalty) and the
/// step lambda(t), with the derivatives of eps and beta.
///
/// Immutable value type; copies share the underlying functions.
class Schedule {
public:
    using Curve = std::function<double(double)>;

    struct Curves {
        Curve eps, beta, lambda, eps_dot, beta_dot;
    };

    Schedule(ScheduleKind kind, Curves curves, std::optional<PowerLawParams> power_law = std::nullopt);

    /// eps(t) = (t+b)^-(r+q), beta(t) = (t+b)^q, lambda(t) = sigma / L(t).
    static Schedule power_law(const PowerLawParams& params, double eta, double mu);
    /// Constant eps, beta and lambda.
    static Schedule constant(double eps, double beta, double lambda);
    /// Constant eps and beta with lambda = sigma / L.
    static Schedule constant_normalized(double eps, double beta, double sigma, double eta, double mu);
    /// Piecewise-linear eps, beta through the knots (held constant past the
    /// ends); lambda(t) = sigma / L(t).
    static Schedule custom(std::vector<ScheduleKnot> knots, double sigma, double eta, double mu);

    double eps(double t) const { return curves_.eps(t); }
    double beta(double t) const { return curves_.beta(t); }
    double lambda(double t) const { return curves_.lambda(t); }
    double eps_dot(double t) const { return curves_.eps_dot(t); }
    double beta_dot(double t) const { return curves_.beta_dot(t); }

    ScheduleKind kind() const noexcept { return kind_; }
    const std::optional<PowerLawParams>& power_law_params() const noexcept { return params_; }

private:
    ScheduleKind kind_;
    Curves curves_;
    std::optional<PowerLawParams> params_;
};

struct ConditionRecord {
    std::string name;
    std::string formula;
    bool passed = false;
    bool symbolic = false;
    /// Sample time of the worst margin; NaN for symbolic checks.
    double worst_t = 0.0;
    /// Distance from the boundary, positive on the passing side.
    double margin = 0.0;
    std::string note;
};

struct ValidationReport {
    std::vector<ConditionRecord> conditions;
    /// True when at least one verdict rests on finite-horizon sampling.
    bool sampled = false;

    bool passed() const noexcept;
    const ConditionRecord* find(std::string_view name) const noexcept;
    std::vector<std::string> failed_names() const;
    std::string to_text() const;
};

void to_json(nlohmann::json& j, const ConditionRecord& record);
void to_json(nlohmann::json& j, const ValidationReport& report);

/// The three closed-form restrictions on (q, r) for the power-law family:
/// 2q+r<1/2 (delta not integrable), 2r+3q<1 (eps_dot/(eps delta) -> 0),
/// 2q+r<=1/3 (beta_dot/(eps delta) bounded).
///
/// Values within a few ulps of a boundary are treated as lying on it, so
/// decimal grid points such as q=0.01, r=0.485 evaluate like their decimal
/// counterparts.
ValidationReport check_power_law_conditions(double q, double r);

struct TheoremQuantities {
    double L;      // Lipschitz modulus of V at t
    double a;      // 2 + 1/(lambda eps) + 1/(eta eps) + beta/(mu eps)
    double delta;  // (1 - lambda L) / a^2
    double kappa;  // Lipschitz bound of the Tseng field at t
};

/// Throws PreconditionError when lambda eps >= 1/eta + beta/mu.
TheoremQuantities theorem_quantities(double eps, double beta, double lambda, double eta, double mu);
TheoremQuantities theorem_quantities(const Schedule& schedule, double eta, double mu, double t);

/// Convergence hypotheses for a schedule. Power-law schedules are decided in
/// closed form; other kinds are sampled on a log-spaced grid over
/// [0, horizon] and the report is flagged as sampled.
ValidationReport validate_schedule(const Schedule& schedule, double eta, double mu, double horizon,
                                   int grid);

/// t_k = (1 + horizon)^(k/(grid-1)) - 1, k = 0..grid-1.
std::vector<double> log_grid(double horizon, int grid);

}  // namespace tsengflow
