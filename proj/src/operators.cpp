#include "tsengflow/operators.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <utility>

namespace tsengflow {

ResolventOperator::ResolventOperator(Function fn, std::string label)
    : fn_(std::make_shared<const Function>(std::move(fn))), label_(std::move(label)) {
    if (!*fn_) throw ContractError("ResolventOperator: empty function");
}

Vector ResolventOperator::apply(double lambda, const Vector& y) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw ContractError(fmt::format("resolvent {}: step must be positive, got {}", label_, lambda));
    }
    require_finite(y, label_);
    Vector out = (*fn_)(lambda, y);
    require_dim(out, y.size(), label_);
    return out;
}

LipschitzMonotoneMap::LipschitzMonotoneMap(Function fn, double lipschitz_constant,
                                           std::optional<double> cocoercivity, std::string label)
    : fn_(std::make_shared<const Function>(std::move(fn))),
      lipschitz_(lipschitz_constant),
      gamma_(cocoercivity),
      label_(std::move(label)) {
    if (!*fn_) throw ContractError("LipschitzMonotoneMap: empty function");
    if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
        throw ContractError(fmt::format("{}: Lipschitz constant must be finite and >= 0", label_));
    }
    if (gamma_ && !(*gamma_ > 0.0)) {
        throw ContractError(fmt::format("{}: cocoercivity constant must be > 0", label_));
    }
}

Vector LipschitzMonotoneMap::operator()(const Vector& x) const {
    require_finite(x, label_);
    Vector out = (*fn_)(x);
    require_dim(out, x.size(), label_);
    return out;
}

ProblemInstance::ProblemInstance(std::string name, Index dim, ResolventOperator A,
                                 LipschitzMonotoneMap D, LipschitzMonotoneMap B, double eta,
                                 double mu, std::optional<SolutionSetInfo> known)
    : name_(std::move(name)),
      dim_(dim),
      A_(std::move(A)),
      D_(std::move(D)),
      B_(std::move(B)),
      eta_(eta),
      mu_(mu),
      known_(std::move(known)) {
    if (dim_ < 1) throw ContractError("ProblemInstance: dimension must be >= 1");
    if (!(eta_ > 0.0) || !(mu_ > 0.0)) {
        throw ContractError("ProblemInstance: eta and mu must be positive");
    }
    constexpr double rel = 1e-12;
    if (D_.lipschitz_constant() > (1.0 / eta_) * (1.0 + rel)) {
        throw ContractError(fmt::format("ProblemInstance {}: D Lipschitz constant {} exceeds 1/eta = {}",
                                        name_, D_.lipschitz_constant(), 1.0 / eta_));
    }
    if (B_.lipschitz_constant() > (1.0 / mu_) * (1.0 + rel)) {
        throw ContractError(fmt::format("ProblemInstance {}: B Lipschitz constant {} exceeds 1/mu = {}",
                                        name_, B_.lipschitz_constant(), 1.0 / mu_));
    }
    if (!B_.cocoercivity()) {
        throw ContractError(fmt::format("ProblemInstance {}: B must be cocoercive", name_));
    }
    if (known_ && known_->feasible_point) {
        const Vector& z = *known_->feasible_point;
        require_dim(z, dim_, "ProblemInstance feasible point");
        const double gap = B_(z).norm();
        if (gap > 1e-12 * (1.0 + z.norm())) {
            throw ContractError(
                fmt::format("ProblemInstance {}: stored feasible point has ||B(z)|| = {}", name_, gap));
        }
    }
    if (known_ && known_->least_norm) require_dim(*known_->least_norm, dim_, "least-norm solution");
}

Vector eval_V(const ProblemInstance& problem, double eps, double beta, const Vector& x) {
    require_dim(x, problem.dim(), "eval_V");
    if (!(eps > 0.0)) throw ContractError(fmt::format("eval_V: eps must be > 0, got {}", eps));
    if (!(beta >= 0.0)) throw ContractError(fmt::format("eval_V: beta must be >= 0, got {}", beta));
    Vector v = problem.D()(x);
    v += eps * x;
    if (beta != 0.0) v += beta * problem.B()(x);
    return v;
}

double lipschitz_modulus(double eta, double mu, double eps, double beta) {
    if (!(eta > 0.0) || !(mu > 0.0)) {
        throw ContractError(fmt::format("lipschitz_modulus: eta, mu must be > 0 (got {}, {})", eta, mu));
    }
    if (!(eps >= 0.0) || !(beta >= 0.0)) {
        throw ContractError("lipschitz_modulus: eps, beta must be >= 0");
    }
    return 1.0 / eta + eps + beta / mu;
}

ResolventOperator resolvent_zero() {
    return ResolventOperator([](double, const Vector& y) { return y; }, "res(0) = Id");
}

ResolventOperator resolvent_box(const Vector& lo, const Vector& hi) {
    if (lo.size() != hi.size() || lo.size() == 0) {
        throw ContractError("resolvent_box: bounds must be nonempty and of equal length");
    }
    for (Index i = 0; i < lo.size(); ++i) {
        if (std::isnan(lo[i]) || std::isnan(hi[i]) || lo[i] > hi[i]) {
            throw ContractError(fmt::format("resolvent_box: lo[{}] = {} > hi[{}] = {}", i, lo[i], i, hi[i]));
        }
    }
    return ResolventOperator(
        [lo, hi](double, const Vector& y) {
            require_dim(y, lo.size(), "resolvent_box");
            return Vector(y.cwiseMax(lo).cwiseMin(hi));
        },
        "projection onto box");
}

ResolventOperator resolvent_l1(double weight) {
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw ContractError(fmt::format("resolvent_l1: weight must be > 0, got {}", weight));
    }
    return ResolventOperator(
        [weight](double lambda, const Vector& y) {
            const double thr = lambda * weight;
            Vector z(y.size());
            for (Index i = 0; i < y.size(); ++i) {
                const double mag = std::abs(y[i]) - thr;
                z[i] = mag > 0.0 ? std::copysign(mag, y[i]) : 0.0;
            }
            return z;
        },
        fmt::format("soft threshold (weight {})", weight));
}

LipschitzMonotoneMap penalty_from_projection(LipschitzMonotoneMap::Function project, std::string label) {
    if (!project) throw ContractError("penalty_from_projection: empty projection");
    return LipschitzMonotoneMap(
        [project = std::move(project)](const Vector& x) { return Vector(x - project(x)); }, 1.0, 1.0,
        std::move(label));
}

LipschitzMonotoneMap penalty_affine(const Matrix& T, const Vector& rhs) {
    if (T.size() == 0 || T.isZero(0.0)) throw ContractError("penalty_affine: T must be nonzero");
    if (rhs.size() != T.rows()) {
        throw ContractError(
            fmt::format("penalty_affine: rhs has length {}, T has {} rows", rhs.size(), T.rows()));
    }
    const double norm_sq = spectral_norm_squared(T);
    return LipschitzMonotoneMap(
        [T, rhs](const Vector& x) {
            require_dim(x, T.cols(), "penalty_affine");
            return Vector(T.transpose() * (T * x - rhs));
        },
        norm_sq, 1.0 / norm_sq, "T^T (T x - t)");
}

LipschitzMonotoneMap affine_map(const Matrix& M, const Vector& c, std::string label) {
    if (M.rows() != M.cols() || c.size() != M.rows()) {
        throw ContractError("affine_map: M must be square and match c");
    }
    const double lip = M.isZero(0.0) ? 0.0 : std::sqrt(spectral_norm_squared(M));
    return LipschitzMonotoneMap(
        [M, c](const Vector& x) {
            require_dim(x, M.cols(), "affine_map");
            return Vector(M * x + c);
        },
        lip, std::nullopt, std::move(label));
}

double spectral_norm_squared(const Matrix& T, double rel_tol, int max_iter) {
    if (T.size() == 0) throw ContractError("spectral_norm_squared: empty matrix");
    Rng rng(0x5eed5eedULL);
    Vector v = gaussian_vector(T.cols(), rng);
    v.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = T.transpose() * (T * v);
        const double rayleigh = v.dot(w);
        const double norm_w = w.norm();
        if (norm_w == 0.0) return 0.0;
        v = w / norm_w;
        if (it > 0 && std::abs(rayleigh - estimate) <= rel_tol * std::abs(rayleigh)) {
            // The Rayleigh quotient of the new iterate is at least as accurate.
            const Vector tv = T * v;
            return std::max(rayleigh, tv.squaredNorm());
        }
        estimate = rayleigh;
    }
    throw NumericalError(
        fmt::format("spectral_norm_squared: power iteration did not converge in {} iterations", max_iter));
}

}  // namespace tsengflow
