#include "tsengflow/common.hpp"

#include <fmt/format.h>

namespace tsengflow {

void require_finite(const Vector& v, std::string_view what) {
    if (!v.allFinite()) {
        throw ContractError(fmt::format("{}: vector has non-finite entries", what));
    }
}

void require_dim(const Vector& v, Index dim, std::string_view what) {
    if (v.size() != dim) {
        throw ContractError(
            fmt::format("{}: dimension mismatch (got {}, expected {})", what, v.size(), dim));
    }
}

Vector gaussian_vector(Index dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = normal(rng);
    return v;
}

Vector uniform_vector(Index dim, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> uniform(lo, hi);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = uniform(rng);
    return v;
}

Matrix uniform_matrix(Index rows, Index cols, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> uniform(lo, hi);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng);
    return m;
}

}  // namespace tsengflow
