#include "tsengflow/problems.hpp"

#include "tsengflow/contracts.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numeric>

namespace tsengflow {

ProblemInstance make_interval_toy(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
        throw ContractError(fmt::format("make_interval_toy: need lo <= hi (got {}, {})", lo, hi));
    }
    auto project = [lo, hi](const Vector& x) { return Vector(x.cwiseMax(lo).cwiseMin(hi)); };
    LipschitzMonotoneMap D([](const Vector& x) { return Vector(Vector::Zero(x.size())); }, 0.0, std::nullopt, "D = 0");
    LipschitzMonotoneMap B = penalty_from_projection(project, fmt::format("Id - Pi_[{}, {}]", lo, hi));

    SolutionSetInfo info;
    info.description = fmt::format("zer(Phi) = [{}, {}]", lo, hi);
    info.least_norm = project(Vector::Zero(1));
    info.feasible_point = info.least_norm;
    info.normal_cone_bound = 0.0;
    return ProblemInstance(fmt::format("interval_toy[{},{}]", lo, hi), 1, resolvent_zero(), std::move(D),
                           std::move(B), 1.0, 1.0, std::move(info));
}

ProblemInstance make_linear_1d(double slope, double shift) {
    if (!(slope >= 0.0) || !std::isfinite(slope) || !std::isfinite(shift)) {
        throw ContractError("make_linear_1d: slope must be finite and >= 0");
    }
    LipschitzMonotoneMap D([slope, shift](const Vector& x) { return Vector(slope * (x.array() - shift)); }, slope,
                           std::nullopt, fmt::format("D(x) = {} (x - {})", slope, shift));
    // B = 0 is 1/mu-Lipschitz for every mu > 0, so mu is taken infinite and
    // beta drops out of L.
    LipschitzMonotoneMap B([](const Vector& x) { return Vector(Vector::Zero(x.size())); }, 0.0, 1.0, "B = 0");

    SolutionSetInfo info;
    const double z = slope > 0.0 ? shift : 0.0;
    info.description = slope > 0.0 ? fmt::format("zer(Phi) = {{{}}}", shift) : "zer(Phi) = R";
    info.least_norm = Vector::Constant(1, z);
    info.feasible_point = info.least_norm;
    info.normal_cone_bound = 0.0;
    const double eta = slope > 0.0 ? 1.0 / slope : 1.0;
    return ProblemInstance(fmt::format("linear_1d[{},{}]", slope, shift), 1, resolvent_zero(), std::move(D),
                           std::move(B), eta, std::numeric_limits<double>::infinity(), std::move(info));
}

// ---------------------------------------------------------------------------
// Saddle point

SaddleData generate_saddle_data(const SaddleSpec& spec) {
    if (spec.n1 < 1 || spec.n2 < 1 || spec.d < 1) throw ContractError("saddle: dimensions must be positive");
    if (!(spec.g > 0.0) || !(spec.f > 0.0)) throw ContractError("saddle: g and f must be positive");
    if (!(spec.box_lo < spec.box_hi)) throw ContractError("saddle: box needs lo < hi");
    const Index n1 = spec.n1, n2 = spec.n2, n = n1 + n2;
    Rng rng(spec.seed);
    SaddleData data;
    data.spec = spec;
    data.Q = uniform_matrix(n2, n1, -1.0, 1.0, rng);
    data.b = uniform_vector(n1, -1.0, 1.0, rng);
    data.c = uniform_vector(n2, -1.0, 1.0, rng);
    data.T = uniform_matrix(spec.d, n, -1.0, 1.0, rng);
    const double width = spec.box_hi - spec.box_lo;
    data.x_feas = uniform_vector(n, spec.box_lo + 0.25 * width, spec.box_hi - 0.25 * width, rng);
    data.rhs = data.T * data.x_feas;

    data.jacobian = Matrix::Zero(n, n);
    data.jacobian.topLeftCorner(n1, n1).diagonal().setConstant(2.0 * spec.g);
    data.jacobian.bottomRightCorner(n2, n2).diagonal().setConstant(2.0 * spec.f);
    data.jacobian.topRightCorner(n1, n2) = data.Q.transpose();
    data.jacobian.bottomLeftCorner(n2, n1) = -data.Q;
    return data;
}

Vector saddle_bilinear_part(const SaddleData& data, const Vector& x) {
    const Index n1 = data.spec.n1, n2 = data.spec.n2;
    require_dim(x, n1 + n2, "saddle_bilinear_part");
    Vector out(n1 + n2);
    out.head(n1) = data.Q.transpose() * x.tail(n2);
    out.tail(n2) = -data.Q * x.head(n1);
    return out;
}

ProblemInstance make_saddle_point(const SaddleData& data) {
    const auto& spec = data.spec;
    const Index n1 = spec.n1, n2 = spec.n2, n = n1 + n2;
    Vector offset(n);
    offset << data.b, data.c;
    LipschitzMonotoneMap D = affine_map(data.jacobian, offset, "saddle operator");
    LipschitzMonotoneMap B = penalty_affine(data.T, data.rhs);
    const double eta = 1.0 / D.lipschitz_constant();
    const double mu = 1.0 / B.lipschitz_constant();
    ResolventOperator A =
        resolvent_box(Vector::Constant(n, spec.box_lo), Vector::Constant(n, spec.box_hi));

    SolutionSetInfo info;
    info.description = "saddle point with coupling constraint T x = t";
    info.feasible_point = data.x_feas;
    return ProblemInstance(fmt::format("saddle[n1={},n2={},d={},seed={}]", n1, n2, spec.d, spec.seed), n,
                           std::move(A), std::move(D), std::move(B), eta, mu, std::move(info));
}

ProblemInstance make_saddle_point(const SaddleSpec& spec) { return make_saddle_point(generate_saddle_data(spec)); }

// ---------------------------------------------------------------------------
// Linear-quadratic GNEP

namespace {

double min_symmetric_eigenvalue(const Matrix& M) {
    const Matrix S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

GnepData draw_gnep(const GnepSpec& spec, std::uint64_t seed) {
    const int N = spec.num_players;
    const Index n = std::accumulate(spec.dims.begin(), spec.dims.end(), Index{0});
    Rng rng(seed);
    GnepData data;
    data.dims = spec.dims;
    data.d = spec.d;
    data.M = Matrix::Zero(n, n);
    Index row = 0;
    for (int i = 0; i < N; ++i) {
        const Index ni = spec.dims[static_cast<std::size_t>(i)];
        Index col = 0;
        for (int j = 0; j < N; ++j) {
            const Index nj = spec.dims[static_cast<std::size_t>(j)];
            if (i == j) {
                const Matrix G = uniform_matrix(ni, ni, -1.0, 1.0, rng);
                data.M.block(row, col, ni, nj) = G * G.transpose() / static_cast<double>(ni);
            } else {
                data.M.block(row, col, ni, nj) = spec.coupling_scale * uniform_matrix(ni, nj, -1.0, 1.0, rng);
            }
            col += nj;
        }
        row += ni;
    }
    data.q = uniform_vector(n, -1.0, 1.0, rng);
    data.T = uniform_matrix(spec.d, n, -1.0, 1.0, rng);
    data.box_lo = Vector::Constant(n, spec.box_lo);
    data.box_hi = Vector::Constant(n, spec.box_hi);
    const double lo = std::isfinite(spec.box_lo) ? spec.box_lo : -1.0;
    const double hi = std::isfinite(spec.box_hi) ? spec.box_hi : 1.0;
    const double width = hi - lo;
    data.x_feas = uniform_vector(n, lo + 0.25 * width, hi - 0.25 * width, rng);
    data.b = data.T * *data.x_feas;

    const double lambda_min = min_symmetric_eigenvalue(data.M);
    data.diagonal_shift = std::max(0.0, -lambda_min) + 1e-6;
    data.M.diagonal().array() += data.diagonal_shift;
    return data;
}

}  // namespace

GnepData generate_gnep_data(const GnepSpec& spec) {
    if (spec.num_players < 1 || spec.dims.size() != static_cast<std::size_t>(spec.num_players)) {
        throw ContractError("gnep: dims must have one entry per player");
    }
    for (int ni : spec.dims)
        if (ni < 1) throw ContractError("gnep: player dimensions must be positive");
    if (spec.d < 1) throw ContractError("gnep: constraint dimension must be positive");
    if (!(spec.box_lo < spec.box_hi)) throw ContractError("gnep: box needs lo < hi");

    for (int attempt = 0; attempt < 10; ++attempt) {
        GnepData data = draw_gnep(spec, spec.seed + static_cast<std::uint64_t>(attempt));
        const Index n = data.M.rows();
        LipschitzMonotoneMap D = affine_map(data.M, data.q, "gnep pseudo-gradient");
        SamplingOptions opts;
        opts.seed = spec.seed ^ 0x9e3779b97f4a7c15ULL;
        if (check_monotone(D, n, opts).passed()) return data;
    }
    throw ContractError("gnep: monotonicity safeguard failed after 10 resamples");
}

ProblemInstance make_gnep(const GnepData& data) {
    const Index n = data.M.rows();
    if (data.M.cols() != n || data.q.size() != n || data.T.cols() != n || data.b.size() != data.T.rows() ||
        data.box_lo.size() != n || data.box_hi.size() != n) {
        throw ContractError("gnep: inconsistent data dimensions");
    }
    if (std::accumulate(data.dims.begin(), data.dims.end(), Index{0}) != n) {
        throw ContractError("gnep: player dimensions do not add up to the stacked dimension");
    }
    const double lambda_min = min_symmetric_eigenvalue(data.M);
    if (lambda_min < -1e-12 * std::max(1.0, data.M.norm())) {
        throw ContractError(fmt::format("gnep: pseudo-gradient is not monotone (min eigenvalue {})", lambda_min));
    }
    LipschitzMonotoneMap D = affine_map(data.M, data.q, "gnep pseudo-gradient");
    LipschitzMonotoneMap B = penalty_affine(data.T, data.b);
    const double eta = D.lipschitz_constant() > 0.0 ? 1.0 / D.lipschitz_constant() : 1.0;
    const double mu = 1.0 / B.lipschitz_constant();

    SolutionSetInfo info;
    info.description = fmt::format("linear-quadratic GNEP with {} players", data.dims.size());
    info.feasible_point = data.x_feas;
    return ProblemInstance(fmt::format("gnep[players={},n={},d={}]", data.dims.size(), n, data.d), n,
                           resolvent_box(data.box_lo, data.box_hi), std::move(D), std::move(B), eta, mu,
                           std::move(info));
}

ProblemInstance make_gnep_linear(const GnepSpec& spec) { return make_gnep(generate_gnep_data(spec)); }

ProblemInstance make_gnep_linear(int num_players, const std::vector<int>& dims, int d, std::uint64_t seed) {
    GnepSpec spec;
    spec.num_players = num_players;
    spec.dims = dims;
    spec.d = d;
    spec.seed = seed;
    return make_gnep_linear(spec);
}

}  // namespace tsengflow
