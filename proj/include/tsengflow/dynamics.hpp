#pragma once

#include "tsengflow/operators.hpp"
#include "tsengflow/schedules.hpp"

namespace tsengflow {

/// Parameters of the field frozen at one time instant.
struct FieldParameters {
    double lambda;
    double eps;
    double beta;
};

struct FieldEvaluation {
    Vector p;     // res_{lambda A}(x - lambda V(x))
    Vector xdot;  // p - x + lambda (V(x) - V(p))
    double residual_fp = 0.0;  // ||x - p||
    double lambda_used = 0.0;
    double eps_used = 0.0;
    double beta_used = 0.0;
};

/// R(x) = x - lambda V_{eps,beta}(x). Requires lambda > 0.
Vector reflect(const ProblemInstance& problem, double eps, double beta, double lambda, const Vector& x);

/// eps(t), beta(t), lambda(t) with the check lambda(t) L(t) < 1.
FieldParameters field_parameters(const ProblemInstance& problem, const Schedule& schedule, double t);

/// Frozen-parameter Tseng step F_{lambda,eps,beta}(x) in the two-line form.
/// Requires lambda L_{eps,beta} < 1.
FieldEvaluation tseng_step(const ProblemInstance& problem, const FieldParameters& params, const Vector& x);

/// The same map written as (R o res_{lambda A} o R)(x) - R(x). Kept as an
/// independent route for cross-checking tseng_step.
Vector tseng_composition(const ProblemInstance& problem, const FieldParameters& params, const Vector& x);

/// f(t, x) of the penalty-regulated Tikhonov dynamics.
FieldEvaluation tseng_field(const ProblemInstance& problem, const Schedule& schedule, double t, const Vector& x);

/// max ||f(t,x) - f(t,y)|| / ||x - y|| over `samples` Gaussian pairs at radii
/// {1, 10, 100}. Requires lambda eps < 1/eta + beta/mu at t.
double field_lipschitz_probe(const ProblemInstance& problem, const Schedule& schedule, double t, int samples,
                             std::uint64_t seed);

struct GrowthEstimate {
    double c_hat = 0.0;       // max ||F(x)|| / (1 + ||x||)
    double max_radius = 0.0;  // largest sampled ||x||
    int samples = 0;
};

/// Empirical linear-growth constant of F_{lambda,eps,beta}. Samples x = 0 and
/// random directions at log-spaced radii up to max_radius (the last at exactly
/// max_radius). Requires lambda < 1/L_{eps,beta}.
GrowthEstimate growth_probe(const ProblemInstance& problem, const FieldParameters& params, int samples,
                            std::uint64_t seed, double max_radius = 1e3);

}  // namespace tsengflow
