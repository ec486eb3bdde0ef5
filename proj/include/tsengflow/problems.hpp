#pragma once

#include "tsengflow/operators.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tsengflow {

/// 1-D instance with A = 0, D = 0 and B = Id - Pi_[lo, hi]; zer(Phi) = [lo, hi].
ProblemInstance make_interval_toy(double lo, double hi);

/// 1-D instance with A = 0, B = 0 and D(x) = slope (x - shift), slope >= 0.
/// slope = 1, shift = 0 is the identity instance used for order checks.
/// mu is +inf: B = 0 is 1/mu-Lipschitz for every mu, and beta drops out of L.
ProblemInstance make_linear_1d(double slope = 1.0, double shift = 0.0);

/// min_{x1 in X1} max_{x2 in X2} <Q x1, x2> + <b, x1> - <c, x2> + g||x1||^2 - f||x2||^2
/// subject to T1 x1 + T2 x2 = t.
struct SaddleSpec {
    int n1 = 10;
    int n2 = 10;
    int d = 5;
    double g = 0.5;
    double f = 0.5;
    double box_lo = -1.0;
    double box_hi = 1.0;
    std::uint64_t seed = 7;
};

struct SaddleData {
    SaddleSpec spec;
    Matrix Q;       // n2 x n1
    Vector b;       // n1
    Vector c;       // n2
    Matrix T;       // d x (n1 + n2), [T1 T2]
    Vector rhs;     // t = T x_feas
    Vector x_feas;  // interior point of X1 x X2
    Matrix jacobian;  // of the saddle operator D, constant
};

SaddleData generate_saddle_data(const SaddleSpec& spec);
ProblemInstance make_saddle_point(const SaddleData& data);
ProblemInstance make_saddle_point(const SaddleSpec& spec);

/// Skew-symmetric part x -> [Q^T x2; -Q x1] of the saddle operator.
Vector saddle_bilinear_part(const SaddleData& data, const Vector& x);

/// Linear-quadratic game: player i minimizes
///   0.5 x_i^T P_i x_i + x_i^T sum_{j != i} C_ij x_j + q_i^T x_i
/// over its box, subject to the shared constraint sum_i T_i x_i = b.
struct GnepData {
    std::vector<int> dims;
    int d = 0;
    Matrix M;   // stacked pseudo-gradient Jacobian (blocks P_i, C_ij)
    Vector q;
    Matrix T;   // d x n, [T_1 ... T_N]
    Vector b;
    Vector box_lo;  // may contain -inf
    Vector box_hi;  // may contain +inf
    std::optional<Vector> x_feas;
    double diagonal_shift = 0.0;  // safeguard shift added to M
};

struct GnepSpec {
    int num_players = 3;
    std::vector<int> dims{2, 2, 2};
    int d = 2;
    double box_lo = -1.0;
    double box_hi = 1.0;
    double coupling_scale = 0.5;
    std::uint64_t seed = 11;
};

/// Seeded random data, shifted so the symmetric part of M is positive
/// semidefinite (plus 1e-6). Resamples up to 10 times if the sampled
/// monotonicity check still fails.
GnepData generate_gnep_data(const GnepSpec& spec);
/// Throws ContractError when M + M^T is not positive semidefinite.
ProblemInstance make_gnep(const GnepData& data);
ProblemInstance make_gnep_linear(int num_players, const std::vector<int>& dims, int d, std::uint64_t seed);
ProblemInstance make_gnep_linear(const GnepSpec& spec);

}  // namespace tsengflow
