#pragma once

#include "tsengflow/common.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace tsengflow {

/// Resolvent J_{lambda A} = (Id + lambda A)^{-1} of a maximally monotone A.
/// The operator A itself is never materialized; the dynamics only need J.
class ResolventOperator {
public:
    using Function = std::function<Vector(double lambda, const Vector& y)>;

    ResolventOperator(Function fn, std::string label);

    /// Requires lambda > 0 and finite y.
    Vector apply(double lambda, const Vector& y) const;

    const std::string& label() const noexcept { return label_; }

private:
    std::shared_ptr<const Function> fn_;
    std::string label_;
};

/// Single-valued Lipschitz monotone map (roles D and B).
///
/// The B role additionally carries a cocoercivity constant gamma:
/// <F(x)-F(y), x-y> >= gamma ||F(x)-F(y)||^2.
class LipschitzMonotoneMap {
public:
    using Function = std::function<Vector(const Vector&)>;

    LipschitzMonotoneMap(Function fn, double lipschitz_constant,
                         std::optional<double> cocoercivity, std::string label);

    Vector operator()(const Vector& x) const;

    double lipschitz_constant() const noexcept { return lipschitz_; }
    std::optional<double> cocoercivity() const noexcept { return gamma_; }
    const std::string& label() const noexcept { return label_; }

private:
    std::shared_ptr<const Function> fn_;
    double lipschitz_;
    std::optional<double> gamma_;
    std::string label_;
};

/// What is known in closed form about zer(Phi) of a test problem.
struct SolutionSetInfo {
    std::string description;
    std::optional<Vector> least_norm;      // Pi_{zer(Phi)}(0)
    std::optional<Vector> feasible_point;  // some z with B(z) = 0
    /// Bound on ||xi|| for a normal-cone element xi at the least-norm solution.
    std::optional<double> normal_cone_bound;
};

/// Instance of 0 in A(x) + D(x) + N_C(x) with C = zer(B).
///
/// D is 1/eta-Lipschitz and B is 1/mu-Lipschitz. The stored map constants
/// must not exceed those bounds; B must carry a cocoercivity constant.
class ProblemInstance {
public:
    ProblemInstance(std::string name, Index dim, ResolventOperator A, LipschitzMonotoneMap D,
                    LipschitzMonotoneMap B, double eta, double mu,
                    std::optional<SolutionSetInfo> known = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    Index dim() const noexcept { return dim_; }
    const ResolventOperator& A() const noexcept { return A_; }
    const LipschitzMonotoneMap& D() const noexcept { return D_; }
    const LipschitzMonotoneMap& B() const noexcept { return B_; }
    double eta() const noexcept { return eta_; }
    double mu() const noexcept { return mu_; }
    double gamma() const noexcept { return *B_.cocoercivity(); }
    const std::optional<SolutionSetInfo>& known() const noexcept { return known_; }

private:
    std::string name_;
    Index dim_;
    ResolventOperator A_;
    LipschitzMonotoneMap D_;
    LipschitzMonotoneMap B_;
    double eta_;
    double mu_;
    std::optional<SolutionSetInfo> known_;
};

/// V_{eps,beta}(x) = D(x) + eps x + beta B(x).
Vector eval_V(const ProblemInstance& problem, double eps, double beta, const Vector& x);

/// L_{eps,beta} = 1/eta + eps + beta/mu, the Lipschitz modulus of V_{eps,beta}.
double lipschitz_modulus(double eta, double mu, double eps, double beta);

ResolventOperator resolvent_zero();
/// Projection onto [lo, hi]; infinite bounds are allowed.
ResolventOperator resolvent_box(const Vector& lo, const Vector& hi);
/// Soft threshold, the resolvent of d(weight ||.||_1).
ResolventOperator resolvent_l1(double weight);

/// B = Id - Pi_C for a projection onto a closed convex C. 1-Lipschitz, 1-cocoercive.
LipschitzMonotoneMap penalty_from_projection(LipschitzMonotoneMap::Function project,
                                             std::string label = "Id - Pi_C");

/// B(x) = T^T (T x - rhs), the gradient of 0.5 ||T x - rhs||^2.
LipschitzMonotoneMap penalty_affine(const Matrix& T, const Vector& rhs);

/// x -> M x + c, Lipschitz constant ||M||. Monotonicity is the caller's concern.
LipschitzMonotoneMap affine_map(const Matrix& M, const Vector& c, std::string label);

/// Largest eigenvalue of T^T T (= ||T||^2) by power iteration from a fixed
/// seeded start vector. Stops when the Rayleigh quotient changes by less than
/// rel_tol relatively; throws NumericalError after max_iter iterations.
double spectral_norm_squared(const Matrix& T, double rel_tol = 1e-10, int max_iter = 10000);

}  // namespace tsengflow
