#include "tsengflow/schedules.hpp"

#include "tsengflow/operators.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <utility>

namespace tsengflow {

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::PowerLaw: return "power-law";
        case ScheduleKind::Constant: return "constant";
        case ScheduleKind::Custom: return "custom";
    }
    return "unknown";
}

Schedule::Schedule(ScheduleKind kind, Curves curves, std::optional<PowerLawParams> power_law)
    : kind_(kind), curves_(std::move(curves)), params_(power_law) {
    if (!curves_.eps || !curves_.beta || !curves_.lambda || !curves_.eps_dot || !curves_.beta_dot) {
        throw ContractError("Schedule: every curve must be set");
    }
}

Schedule Schedule::power_law(const PowerLawParams& p, double eta, double mu) {
    for (auto [name, value] : {std::pair{"b", p.b}, std::pair{"q", p.q}, std::pair{"r", p.r}}) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ContractError(fmt::format("power_law_schedule: {} must be in (0, inf), got {}", name, value));
        }
    }
    if (!(p.sigma > 0.0 && p.sigma < 1.0)) {
        throw ContractError(fmt::format("power_law_schedule: sigma must be in (0, 1), got {}", p.sigma));
    }
    lipschitz_modulus(eta, mu, 0.0, 0.0);  // validates eta, mu

    const double b = p.b, q = p.q, r = p.r, sigma = p.sigma;
    Curves c;
    c.eps = [=](double t) { return std::pow(t + b, -(r + q)); };
    c.beta = [=](double t) { return std::pow(t + b, q); };
    c.eps_dot = [=](double t) { return -(r + q) * std::pow(t + b, -(r + q) - 1.0); };
    c.beta_dot = [=](double t) { return q * std::pow(t + b, q - 1.0); };
    c.lambda = [=](double t) {
        return sigma / lipschitz_modulus(eta, mu, std::pow(t + b, -(r + q)), std::pow(t + b, q));
    };
    return Schedule(ScheduleKind::PowerLaw, std::move(c), p);
}

Schedule Schedule::constant(double eps, double beta, double lambda) {
    if (!(eps > 0.0) || !(beta > 0.0) || !(lambda > 0.0)) {
        throw ContractError("constant schedule: eps, beta, lambda must be positive");
    }
    Curves c;
    c.eps = [eps](double) { return eps; };
    c.beta = [beta](double) { return beta; };
    c.lambda = [lambda](double) { return lambda; };
    c.eps_dot = [](double) { return 0.0; };
    c.beta_dot = [](double) { return 0.0; };
    return Schedule(ScheduleKind::Constant, std::move(c));
}

Schedule Schedule::constant_normalized(double eps, double beta, double sigma, double eta, double mu) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw ContractError("constant schedule: sigma must be in (0, 1)");
    return constant(eps, beta, sigma / lipschitz_modulus(eta, mu, eps, beta));
}

Schedule Schedule::custom(std::vector<ScheduleKnot> knots, double sigma, double eta, double mu) {
    if (knots.empty()) throw ContractError("custom schedule: at least one knot required");
    if (!(sigma > 0.0 && sigma < 1.0)) throw ContractError("custom schedule: sigma must be in (0, 1)");
    lipschitz_modulus(eta, mu, 0.0, 0.0);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        if (!(k.eps > 0.0) || !(k.beta > 0.0) || !std::isfinite(k.t)) {
            throw ContractError(fmt::format("custom schedule: knot {} needs eps, beta > 0", i));
        }
        if (i > 0 && !(k.t > knots[i - 1].t)) {
            throw ContractError(fmt::format("custom schedule: knot times must increase (knot {})", i));
        }
    }
    auto table = std::make_shared<const std::vector<ScheduleKnot>>(std::move(knots));

    // Segment index such that t lies in [t_i, t_{i+1}); -1 before, n-1 after.
    auto locate = [table](double t) -> std::ptrdiff_t {
        const auto& k = *table;
        auto it = std::upper_bound(k.begin(), k.end(), t,
                                   [](double v, const ScheduleKnot& knot) { return v < knot.t; });
        return std::distance(k.begin(), it) - 1;
    };
    auto interp = [table, locate](double t, double ScheduleKnot::*field) {
        const auto& k = *table;
        const auto i = locate(t);
        if (i < 0) return k.front().*field;
        if (static_cast<std::size_t>(i) + 1 >= k.size()) return k.back().*field;
        const auto& a = k[static_cast<std::size_t>(i)];
        const auto& b = k[static_cast<std::size_t>(i) + 1];
        const double w = (t - a.t) / (b.t - a.t);
        return (1.0 - w) * (a.*field) + w * (b.*field);
    };
    auto slope = [table, locate](double t, double ScheduleKnot::*field) {
        const auto& k = *table;
        const auto i = locate(t);
        if (i < 0 || static_cast<std::size_t>(i) + 1 >= k.size()) return 0.0;
        const auto& a = k[static_cast<std::size_t>(i)];
        const auto& b = k[static_cast<std::size_t>(i) + 1];
        return ((b.*field) - (a.*field)) / (b.t - a.t);
    };

    Curves c;
    c.eps = [interp](double t) { return interp(t, &ScheduleKnot::eps); };
    c.beta = [interp](double t) { return interp(t, &ScheduleKnot::beta); };
    c.eps_dot = [slope](double t) { return slope(t, &ScheduleKnot::eps); };
    c.beta_dot = [slope](double t) { return slope(t, &ScheduleKnot::beta); };
    c.lambda = [interp, sigma, eta, mu](double t) {
        return sigma / lipschitz_modulus(eta, mu, interp(t, &ScheduleKnot::eps), interp(t, &ScheduleKnot::beta));
    };
    return Schedule(ScheduleKind::Custom, std::move(c));
}

// ---------------------------------------------------------------------------
// Reports

bool ValidationReport::passed() const noexcept {
    return !conditions.empty() &&
           std::all_of(conditions.begin(), conditions.end(), [](const ConditionRecord& c) { return c.passed; });
}

const ConditionRecord* ValidationReport::find(std::string_view name) const noexcept {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> ValidationReport::failed_names() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
        if (!c.passed) out.push_back(c.name);
    return out;
}

std::string ValidationReport::to_text() const {
    std::string out = fmt::format("schedule validation: {}{}\n", passed() ? "PASS" : "FAIL",
                                  sampled ? " (sampled, not a proof)" : " (symbolic)");
    for (const auto& c : conditions) {
        out += fmt::format("  [{}] {:<32} {}", c.passed ? "pass" : "FAIL", c.name, c.formula);
        out += fmt::format("  margin={:.6g}", c.margin);
        if (!c.symbolic) out += fmt::format(" worst_t={:.6g}", c.worst_t);
        if (!c.note.empty()) out += fmt::format("  ({})", c.note);
        out += '\n';
    }
    return out;
}

void to_json(nlohmann::json& j, const ConditionRecord& c) {
    j = nlohmann::json{{"name", c.name},
                       {"formula", c.formula},
                       {"passed", c.passed},
                       {"mode", c.symbolic ? "symbolic" : "sampled"},
                       {"margin", c.margin},
                       {"note", c.note}};
    if (c.symbolic) {
        j["worst_t"] = nullptr;
    } else {
        j["worst_t"] = c.worst_t;
    }
}

void to_json(nlohmann::json& j, const ValidationReport& r) {
    j = nlohmann::json{{"passed", r.passed()}, {"sampled", r.sampled}, {"conditions", r.conditions}};
}

// ---------------------------------------------------------------------------
// Closed-form checks

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// lhs (<|<=) bound, with lhs within a few ulps of bound counted as equal.
ConditionRecord inequality(std::string name, std::string formula, long double lhs, double bound, bool strict) {
    const long double diff = static_cast<long double>(bound) - lhs;
    const bool on_boundary = std::abs(diff) <= 8.0L * DBL_EPSILON * std::max(1.0, std::abs(bound));
    ConditionRecord rec;
    rec.name = std::move(name);
    rec.formula = std::move(formula);
    rec.symbolic = true;
    rec.worst_t = kNaN;
    rec.margin = on_boundary ? 0.0 : static_cast<double>(diff);
    rec.passed = on_boundary ? !strict : diff > 0;
    return rec;
}

}  // namespace

ValidationReport check_power_law_conditions(double q, double r) {
    if (!(q > 0.0) || !(r > 0.0)) throw ContractError("check_power_law_conditions: q, r must be positive");
    const long double Q = q, R = r;
    ValidationReport report;
    auto c1 = inequality("2q+r<1/2", "integral of delta diverges: eps^2/beta^2 = (t+b)^-2(r+2q)", 2 * Q + R,
                         0.5, true);
    auto c2 = inequality("2r+3q<1", "eps_dot/(eps delta) -> 0", 2 * R + 3 * Q, 1.0, true);
    auto c3 = inequality("2q+r<=1/3", "beta_dot/(eps delta) = O(1): q (t+b)^(6q+3r-1) bounded", 2 * Q + R,
                         1.0 / 3.0, false);
    report.conditions = {std::move(c1), std::move(c2), std::move(c3)};
    return report;
}

TheoremQuantities theorem_quantities(double eps, double beta, double lambda, double eta, double mu) {
    const double L = lipschitz_modulus(eta, mu, eps, beta);
    if (!(eps > 0.0) || !(lambda > 0.0)) throw ContractError("theorem_quantities: eps, lambda must be > 0");
    const double rhs = 1.0 / eta + beta / mu;
    if (!(lambda * eps < rhs)) {
        throw PreconditionError(
            fmt::format("field Lipschitz hypothesis violated: lambda*eps = {} >= 1/eta + beta/mu = {}", lambda * eps, rhs));
    }
    TheoremQuantities out{};
    out.L = L;
    out.a = 2.0 + 1.0 / (lambda * eps) + 1.0 / (eta * eps) + beta / (mu * eps);
    out.delta = (1.0 - lambda * L) / (out.a * out.a);
    out.kappa = std::sqrt((1.0 + 2.0 * lambda * L) * (1.0 + lambda * lambda * L * L - 2.0 * lambda * eps));
    return out;
}

TheoremQuantities theorem_quantities(const Schedule& s, double eta, double mu, double t) {
    if (!(t >= 0.0)) throw ContractError("theorem_quantities: t must be >= 0");
    return theorem_quantities(s.eps(t), s.beta(t), s.lambda(t), eta, mu);
}

std::vector<double> log_grid(double horizon, int grid) {
    if (!(horizon > 0.0) || grid < 2) throw ContractError("log_grid: need horizon > 0 and grid >= 2");
    std::vector<double> ts(static_cast<std::size_t>(grid));
    const double span = std::log1p(horizon);
    for (int k = 0; k < grid; ++k) {
        ts[static_cast<std::size_t>(k)] = std::expm1(span * k / (grid - 1));
    }
    ts.front() = 0.0;
    ts.back() = horizon;
    return ts;
}

// ---------------------------------------------------------------------------
// Schedule validation

namespace {

ConditionRecord symbolic(std::string name, std::string formula, bool passed, double margin, std::string note) {
    ConditionRecord r;
    r.name = std::move(name);
    r.formula = std::move(formula);
    r.passed = passed;
    r.symbolic = true;
    r.worst_t = kNaN;
    r.margin = margin;
    r.note = std::move(note);
    return r;
}

ConditionRecord sampled(std::string name, std::string formula, bool passed, double worst_t, double margin,
                        std::string note) {
    ConditionRecord r;
    r.name = std::move(name);
    r.formula = std::move(formula);
    r.passed = passed;
    r.symbolic = false;
    r.worst_t = worst_t;
    r.margin = margin;
    r.note = std::move(note);
    return r;
}

ValidationReport validate_power_law(const Schedule& s, double eta, double mu) {
    const PowerLawParams& p = *s.power_law_params();
    ValidationReport report = check_power_law_conditions(p.q, p.r);
    report.conditions.push_back(symbolic("eps decreasing, beta increasing", "r+q > 0 and q > 0", true,
                                         std::min(p.q, p.r + p.q), "monotone parameters"));
    report.conditions.push_back(symbolic("lambda*L<1", "lambda(t) L(t) = sigma", p.sigma < 1.0, 1.0 - p.sigma,
                                         "lambda = sigma / L"));
    report.conditions.push_back(symbolic("limsup lambda*beta<mu", "lambda beta = sigma beta / L <= sigma mu",
                                         p.sigma < 1.0, mu * (1.0 - p.sigma), ""));
    // sigma eps/(L (L - eps)) decreases in t because eps decreases and beta
    // increases, so t = 0 is the worst case.
    const double eps0 = s.eps(0.0), beta0 = s.beta(0.0), lambda0 = s.lambda(0.0);
    const double rhs0 = 1.0 / eta + beta0 / mu;
    report.conditions.push_back(symbolic("lambda*eps<1/eta+beta/mu", "field Lipschitz hypothesis, worst at t=0",
                                         lambda0 * eps0 < rhs0, rhs0 - lambda0 * eps0, ""));
    report.sampled = false;
    return report;
}

struct Samples {
    std::vector<double> t, eps, beta, lambda, eps_dot, beta_dot, L, delta, hypothesis_margin;
};

Samples sample(const Schedule& s, double eta, double mu, const std::vector<double>& ts) {
    Samples out;
    out.t = ts;
    for (double t : ts) {
        const double e = s.eps(t), b = s.beta(t), l = s.lambda(t);
        out.eps.push_back(e);
        out.beta.push_back(b);
        out.lambda.push_back(l);
        out.eps_dot.push_back(s.eps_dot(t));
        out.beta_dot.push_back(s.beta_dot(t));
        const double L = lipschitz_modulus(eta, mu, std::max(e, 0.0), std::max(b, 0.0));
        out.L.push_back(L);
        const double a = 2.0 + 1.0 / (l * e) + 1.0 / (eta * e) + b / (mu * e);
        out.delta.push_back((1.0 - l * L) / (a * a));
        out.hypothesis_margin.push_back(1.0 / eta + b / mu - l * e);
    }
    return out;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y, std::size_t from, std::size_t to) {
    double acc = 0.0;
    for (std::size_t i = from; i < to; ++i) acc += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
    return acc;
}

ValidationReport validate_sampled(const Schedule& s, double eta, double mu, double horizon, int grid) {
    const auto ts = log_grid(horizon, std::max(grid, 8));
    const Samples S = sample(s, eta, mu, ts);
    const std::size_t n = ts.size();
    const std::size_t half = n / 2, quarter = (3 * n) / 4;
    constexpr double rel = 1e-12;
    const std::string note = "sampled, not a proof";
    ValidationReport report;
    report.sampled = true;

    {  // positivity
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::min({S.eps[i], S.beta[i], S.lambda[i]});
            if (m < worst) worst = m, wt = ts[i];
        }
        report.conditions.push_back(sampled("eps, beta, lambda > 0", "positivity", worst > 0.0, wt, worst, note));
    }
    {  // weak monotonicity
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double m = std::min(S.eps[i - 1] - S.eps[i], S.beta[i] - S.beta[i - 1]);
            if (m < worst) worst = m, wt = ts[i];
        }
        report.conditions.push_back(sampled("eps nonincreasing, beta nondecreasing", "monotone parameters",
                                            worst >= 0.0, wt, worst, note));
    }
    {  // Tikhonov term must vanish: strict decrease everywhere
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double m = S.eps[i - 1] - S.eps[i];
            if (m < worst) worst = m, wt = ts[i];
        }
        const bool ok = worst > 0.0 && S.eps.back() < S.eps.front();
        report.conditions.push_back(sampled("lim eps(t)=0 implied by (b)",
                                            "eps strictly decreasing on the grid (strict monotonicity)", ok, wt,
                                            worst,
                                            ok ? note : "non-vanishing Tikhonov term: x_bar(t) cannot approach zer(Phi)"));
    }
    {
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = 1.0 - S.lambda[i] * S.L[i];
            if (m < worst) worst = m, wt = ts[i];
        }
        report.conditions.push_back(sampled("lambda*L<1", "lambda(t) L(t) < 1", worst > 0.0, wt, worst, note));
    }
    {
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (S.hypothesis_margin[i] < worst) worst = S.hypothesis_margin[i], wt = ts[i];
        }
        report.conditions.push_back(
            sampled("lambda*eps<1/eta+beta/mu", "field Lipschitz hypothesis", worst > 0.0, wt, worst, note));
    }
    {  // limsup over the second half of the horizon
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = half; i < n; ++i) {
            const double m = mu - S.lambda[i] * S.beta[i];
            if (m < worst) worst = m, wt = ts[i];
        }
        report.conditions.push_back(
            sampled("limsup lambda*beta<mu", "max over t >= t_mid of lambda beta < mu", worst > 0.0, wt, worst, note));
    }
    {  // delta -> 0: nonincreasing on the last quarter and below its start value
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = quarter + 1; i < n; ++i) {
            const double m = S.delta[i - 1] - S.delta[i] + rel * std::abs(S.delta[i - 1]);
            if (m < worst) worst = m, wt = ts[i];
        }
        const double drop = S.delta.front() - S.delta.back();
        const bool ok = worst >= 0.0 && drop > rel * std::abs(S.delta.front());
        report.conditions.push_back(sampled("lim delta(t)=0", "delta decreasing on the last quarter of the grid",
                                            ok, wt, std::min(worst, drop), note));
    }
    {  // int delta = inf: the integral over the last log-segment must not be
       // smaller than over the one before (delta ~ t^-p with p <= 1).
        const double prev = trapezoid(ts, S.delta, half, quarter);
        const double last = trapezoid(ts, S.delta, quarter, n - 1);
        const double ratio = prev > 0.0 ? last / prev : 0.0;
        report.conditions.push_back(sampled("integral of delta = inf",
                                            "trapezoid integral over equal log-segments non-decreasing",
                                            ratio >= 1.0 - 1e-6, horizon, ratio - 1.0, note));
    }
    {  // |eps_dot|/(eps delta) -> 0
        std::vector<double> ratio(n);
        for (std::size_t i = 0; i < n; ++i) ratio[i] = std::abs(S.eps_dot[i]) / (S.eps[i] * S.delta[i]);
        double worst = std::numeric_limits<double>::infinity(), wt = 0.0;
        for (std::size_t i = quarter + 1; i < n; ++i) {
            const double m = ratio[i - 1] - ratio[i] + rel * ratio[i - 1];
            if (m < worst) worst = m, wt = ts[i];
        }
        report.conditions.push_back(sampled("lim |eps_dot|/(eps delta)=0",
                                            "ratio nonincreasing on the last quarter of the grid", worst >= 0.0, wt,
                                            worst, note));
    }
    {  // beta_dot/(eps delta) bounded
        std::vector<double> ratio(n);
        for (std::size_t i = 0; i < n; ++i) ratio[i] = S.beta_dot[i] / (S.eps[i] * S.delta[i]);
        double prev_max = 0.0, last_max = 0.0, wt = 0.0;
        for (std::size_t i = half; i < quarter; ++i) prev_max = std::max(prev_max, ratio[i]);
        for (std::size_t i = quarter; i < n; ++i) {
            if (ratio[i] > last_max) last_max = ratio[i], wt = ts[i];
        }
        const double bound = prev_max * (1.0 + 1e-6);
        report.conditions.push_back(sampled("beta_dot/(eps delta)=O(1)",
                                            "max on the last quarter <= max on the quarter before",
                                            last_max <= bound, wt, bound - last_max, note));
    }
    return report;
}

}  // namespace

ValidationReport validate_schedule(const Schedule& schedule, double eta, double mu, double horizon, int grid) {
    if (!(horizon > 0.0) || grid < 2) throw ContractError("validate_schedule: need horizon > 0 and grid >= 2");
    if (schedule.kind() == ScheduleKind::PowerLaw && schedule.power_law_params()) {
        return validate_power_law(schedule, eta, mu);
    }
    return validate_sampled(schedule, eta, mu, horizon, grid);
}

}  // namespace tsengflow
