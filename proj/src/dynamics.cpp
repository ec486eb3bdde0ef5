#include "tsengflow/dynamics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace tsengflow {
namespace {

void require_step(const ProblemInstance& problem, const FieldParameters& params) {
    if (!(params.lambda > 0.0)) {
        throw ContractError(fmt::format("Tseng step: lambda must be > 0, got {}", params.lambda));
    }
    const double L = lipschitz_modulus(problem.eta(), problem.mu(), params.eps, params.beta);
    if (!(params.lambda * L < 1.0)) {
        throw PreconditionError(fmt::format("lambda*L = {} >= 1 (lambda = {}, L = {})", params.lambda * L,
                                            params.lambda, L));
    }
}

}  // namespace

Vector reflect(const ProblemInstance& problem, double eps, double beta, double lambda, const Vector& x) {
    if (!(lambda > 0.0)) throw ContractError(fmt::format("reflect: lambda must be > 0, got {}", lambda));
    return x - lambda * eval_V(problem, eps, beta, x);
}

FieldParameters field_parameters(const ProblemInstance& problem, const Schedule& schedule, double t) {
    if (!(t >= 0.0)) throw ContractError(fmt::format("field evaluated at negative time {}", t));
    FieldParameters params{schedule.lambda(t), schedule.eps(t), schedule.beta(t)};
    const double L = lipschitz_modulus(problem.eta(), problem.mu(), params.eps, params.beta);
    if (!(params.lambda * L < 1.0)) {
        throw PreconditionError(fmt::format("lambda(t)*L(t) = {} >= 1 at t = {}", params.lambda * L, t));
    }
    return params;
}

FieldEvaluation tseng_step(const ProblemInstance& problem, const FieldParameters& params, const Vector& x) {
    require_step(problem, params);
    const double lambda = params.lambda;
    const Vector Vx = eval_V(problem, params.eps, params.beta, x);
    FieldEvaluation out;
    out.p = problem.A().apply(lambda, x - lambda * Vx);
    const Vector Vp = eval_V(problem, params.eps, params.beta, out.p);
    out.xdot = out.p - x + lambda * (Vx - Vp);
    out.residual_fp = (x - out.p).norm();
    out.lambda_used = lambda;
    out.eps_used = params.eps;
    out.beta_used = params.beta;
    return out;
}

Vector tseng_composition(const ProblemInstance& problem, const FieldParameters& params, const Vector& x) {
    require_step(problem, params);
    auto R = [&](const Vector& y) { return reflect(problem, params.eps, params.beta, params.lambda, y); };
    const Vector Rx = R(x);
    return R(problem.A().apply(params.lambda, Rx)) - Rx;
}

FieldEvaluation tseng_field(const ProblemInstance& problem, const Schedule& schedule, double t, const Vector& x) {
    return tseng_step(problem, field_parameters(problem, schedule, t), x);
}

double field_lipschitz_probe(const ProblemInstance& problem, const Schedule& schedule, double t, int samples,
                             std::uint64_t seed) {
    if (samples < 1) throw ContractError("field_lipschitz_probe: samples must be >= 1");
    const FieldParameters params = field_parameters(problem, schedule, t);
    // theorem_quantities enforces the hypothesis lambda eps < 1/eta + beta/mu.
    theorem_quantities(params.eps, params.beta, params.lambda, problem.eta(), problem.mu());

    constexpr std::array<double, 3> radii{1.0, 10.0, 100.0};
    Rng rng(seed);
    double worst = 0.0;
    int taken = 0;
    while (taken < samples) {
        const double radius = radii[static_cast<std::size_t>(taken) % radii.size()];
        const Vector x = radius * gaussian_vector(problem.dim(), rng);
        const Vector y = radius * gaussian_vector(problem.dim(), rng);
        const double dist = (x - y).norm();
        if (dist == 0.0) continue;
        const Vector fx = tseng_step(problem, params, x).xdot;
        const Vector fy = tseng_step(problem, params, y).xdot;
        worst = std::max(worst, (fx - fy).norm() / dist);
        ++taken;
    }
    return worst;
}

GrowthEstimate growth_probe(const ProblemInstance& problem, const FieldParameters& params, int samples,
                            std::uint64_t seed, double max_radius) {
    if (samples < 1) throw ContractError("growth_probe: samples must be >= 1");
    if (!(max_radius > 0.0)) throw ContractError("growth_probe: max_radius must be > 0");
    const double L = lipschitz_modulus(problem.eta(), problem.mu(), params.eps, params.beta);
    if (!(params.lambda > 0.0 && params.lambda < 1.0 / L)) {
        throw PreconditionError(fmt::format("growth_probe: lambda = {} must lie in (0, 1/L) = (0, {})",
                                            params.lambda, 1.0 / L));
    }
    GrowthEstimate est;
    est.c_hat = tseng_step(problem, params, Vector::Zero(problem.dim())).xdot.norm();
    est.samples = 1;
    Rng rng(seed);
    const double log_max = std::log10(max_radius);
    for (int k = 1; k < samples; ++k) {
        // log-spaced radii over [1e-2, max_radius], the last exactly at max_radius
        const double w = samples > 2 ? static_cast<double>(k - 1) / (samples - 2) : 1.0;
        const double radius = std::pow(10.0, -2.0 + w * (log_max + 2.0));
        Vector x = gaussian_vector(problem.dim(), rng);
        x *= radius / x.norm();
        const double norm_f = tseng_step(problem, params, x).xdot.norm();
        est.c_hat = std::max(est.c_hat, norm_f / (1.0 + x.norm()));
        est.max_radius = std::max(est.max_radius, x.norm());
        ++est.samples;
    }
    return est;
}

}  // namespace tsengflow
