#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsengflow/dynamics.hpp"
#include "tsengflow/oracle.hpp"
#include "tsengflow/problems.hpp"

#include <cmath>

using namespace tsengflow;

namespace {

ProblemInstance zero_problem(Index dim) {
    return ProblemInstance("zero", dim, resolvent_zero(), affine_map(Matrix::Zero(dim, dim), Vector::Zero(dim), "0"),
                           penalty_from_projection([](const Vector& x) { return x; }), 1.0, 1.0);
}

}  // namespace

TEST_CASE("auxiliary solutions in closed form") {
    const auto toy = make_interval_toy(1, 2);
    CHECK(solve_auxiliary(toy, 0.1, 1.0, 1e-10, 1'000'000).x_bar(0) == doctest::Approx(1.0 / 1.1).epsilon(1e-8));

    const auto lin = make_linear_1d(1.0, 1.0);
    CHECK(solve_auxiliary(lin, 0.25, 0.0, 1e-10, 1'000'000).x_bar(0) == doctest::Approx(0.8).epsilon(1e-8));

    const auto zero = zero_problem(3);
    const auto sol = solve_auxiliary(zero, 0.7, 0.0, 1e-10, 1'000'000);
    CHECK(sol.x_bar.norm() == 0.0);
    CHECK(sol.iterations == 0);
}

TEST_CASE("auxiliary solution residual and stability") {
    const auto p = make_saddle_point(SaddleSpec{5, 5, 3});
    const double tol = 1e-9;
    const auto sol = solve_auxiliary(p, 0.1, 10.0, tol, 5'000'000);
    CHECK(sol.residual <= tol * std::max(1.0, sol.x_bar.norm()) * 1.0000001);
    const double L = lipschitz_modulus(p.eta(), p.mu(), 0.1, 10.0);
    const auto again = tseng_step(p, {0.5 / L, 0.1, 10.0}, sol.x_bar);
    CHECK(again.residual_fp <= 2.0 * tol * std::max(1.0, sol.x_bar.norm()));
}

TEST_CASE("auxiliary solver errors") {
    const auto toy = make_interval_toy(1, 2);
    CHECK_THROWS_AS(solve_auxiliary(toy, 0.0, 1.0, 1e-8, 10), ContractError);
    try {
        solve_auxiliary(toy, 1e-3, 1.0, 1e-14, 3);
        FAIL("expected non-convergence");
    } catch (const NonConvergenceError& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.best_residual() > 0.0);
    }
}

TEST_CASE("least-norm solutions on interval toys") {
    CHECK(least_norm_solution(make_interval_toy(1, 2), 1e-8)(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(least_norm_solution(make_interval_toy(-2, -1), 1e-8)(0) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(std::abs(least_norm_solution(make_interval_toy(-1, 1), 1e-8)(0)) <= 1e-8);
    CHECK(least_norm_solution(make_linear_1d(1.0, 1.0), 1e-8)(0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(least_norm_solution(zero_problem(2), 1e-8).norm() <= 1e-8);
}

TEST_CASE("least-norm solution is invariant to rho") {
    const auto p = make_gnep_linear(GnepSpec{});
    const double tol = 1e-6;
    const Vector base = least_norm_solution(p, tol, 0.5);
    for (double rho : {0.3, 0.7}) CHECK((least_norm_solution(p, tol, rho) - base).norm() <= 20.0 * tol);
}

TEST_CASE("least-norm path records the geometric sequence") {
    const auto res = least_norm_path(make_interval_toy(1, 2), 1e-8);
    REQUIRE(res.path.size() >= 2);
    for (const auto& step : res.path) {
        CHECK(step.eps == doctest::Approx(std::pow(0.5, step.n)));
        CHECK(step.beta == doctest::Approx(std::pow(2.0, step.n)));
        CHECK(step.x_bar(0) == doctest::Approx(step.beta / (step.eps + step.beta)).epsilon(1e-9));
        CHECK(step.x_bar.norm() <= 1.0 + 1e-6);
    }
}

TEST_CASE("norm bound along the path on a saddle instance") {
    const auto p = make_saddle_point(SaddleSpec{5, 5, 3});
    const double a = least_norm_solution(p, 1e-7).norm();
    for (const auto& step : least_norm_path(p, 1e-7).path) CHECK(step.x_bar.norm() <= a + 1e-6);
}

TEST_CASE("solution map Lipschitz bound on the interval toy") {
    const auto toy = make_interval_toy(1, 2);
    const std::vector<std::pair<ParameterPoint, ParameterPoint>> pairs{
        {{0.1, 1.0}, {0.1, 1.0}}, {{0.1, 1.0}, {0.1, 2.0}}};
    const auto report = verify_solution_map_lipschitz(toy, pairs, 1e-8);
    CHECK(report.passed());
    CHECK(report.a_hat == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(report.ell_hat == doctest::Approx(2.0).epsilon(1e-7));  // ||B|| = 2 at x = -a_hat
    CHECK(report.pairs[0].lhs == 0.0);
    CHECK(report.pairs[0].rhs == 0.0);
    CHECK(report.pairs[0].margin == 0.0);
    CHECK(report.pairs[1].lhs == doctest::Approx(std::abs(1.0 / 1.1 - 2.0 / 2.1)).epsilon(1e-6));
    CHECK(report.pairs[1].rhs == doctest::Approx(report.ell_hat / 0.1));
}

TEST_CASE("estimate_ell is at least the radius") {
    const auto p = make_linear_1d(1.0, 0.0);  // B = 0
    CHECK(estimate_ell(p, 3.0, 16, 1) == 3.0);
}

TEST_CASE("feasibility decay on the interval toy") {
    const auto report = verify_feasibility_decay(make_interval_toy(1, 2));
    CHECK(report.hypothesis_met);
    CHECK(report.monotone);
    CHECK(report.reached_target);
    CHECK(report.inequality_checked);
    CHECK(report.inequality_holds);
    CHECK(report.verdict == DecayVerdict::Pass);
    for (const auto& row : report.rows) {
        CHECK(row.norm_B_xbar == doctest::Approx(row.eps / (row.eps + row.beta)).epsilon(1e-8));
    }
}

TEST_CASE("feasibility decay with constant beta is inconclusive") {
    FeasibilityDecayOptions opts;
    opts.sequence = {1.0, 1.0, 0.5, 1.0};
    opts.n_max = 10;
    const auto report = verify_feasibility_decay(make_interval_toy(1, 2), opts);
    CHECK_FALSE(report.hypothesis_met);
    CHECK(report.verdict == DecayVerdict::Inconclusive);
    CHECK_FALSE(report.reached_target);
}

TEST_CASE("feasibility decay on a saddle instance") {
    FeasibilityDecayOptions opts;
    opts.n_max = 24;
    opts.inner_tol = 1e-10;
    const auto report = verify_feasibility_decay(make_saddle_point(SaddleSpec{5, 5, 3}), opts);
    CHECK(report.monotone);
    CHECK(report.reached_target);
    CHECK(report.verdict == DecayVerdict::Pass);
}
