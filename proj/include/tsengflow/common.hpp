#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsengflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Violated construction or call contract (bad dimension, bad parameter).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A mathematical hypothesis required by an operation does not hold,
/// e.g. lambda(t) L(t) >= 1 for the Tseng field.
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericalError {
public:
    NonConvergenceError(const std::string& what, double best_residual, long iterations)
        : NumericalError(what), best_residual_(best_residual), iterations_(iterations) {}

    double best_residual() const noexcept { return best_residual_; }
    long iterations() const noexcept { return iterations_; }

private:
    double best_residual_;
    long iterations_;
};

class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, double last_finite_t)
        : NumericalError(what), last_finite_t_(last_finite_t) {}

    double last_finite_t() const noexcept { return last_finite_t_; }

private:
    double last_finite_t_;
};

void require_finite(const Vector& v, std::string_view what);
void require_dim(const Vector& v, Index dim, std::string_view what);

using Rng = std::mt19937_64;

/// Standard-normal vector drawn from `rng`.
Vector gaussian_vector(Index dim, Rng& rng);

/// Entries i.i.d. uniform on [lo, hi].
Vector uniform_vector(Index dim, double lo, double hi, Rng& rng);
Matrix uniform_matrix(Index rows, Index cols, double lo, double hi, Rng& rng);

/// Euclidean inner product.
inline double inner(const Vector& a, const Vector& b) { return a.dot(b); }

}  // namespace tsengflow
