#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsengflow/dynamics.hpp"
#include "tsengflow/oracle.hpp"
#include "tsengflow/problems.hpp"

#include <cmath>

using namespace tsengflow;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

// D = Id, B = 0 declared with eta = mu = 1.
ProblemInstance identity_unit_constants() {
    return ProblemInstance("D=Id, mu=1", 1, resolvent_zero(),
                           affine_map(Matrix::Identity(1, 1), Vector::Zero(1), "Id"),
                           penalty_from_projection([](const Vector& x) { return x; }, "B = 0"), 1.0, 1.0);
}

}  // namespace

TEST_CASE("reflect examples") {
    const auto p = make_linear_1d();
    CHECK(reflect(p, 1.0, 0.0, 0.25, scalar(1.0))(0) == doctest::Approx(0.5));
    CHECK(reflect(p, 1.0, 0.0, 0.25, scalar(0.0))(0) == 0.0);
    CHECK_THROWS_AS(reflect(p, 1.0, 0.0, 0.0, scalar(1.0)), ContractError);
}

TEST_CASE("Tseng step by hand in 1-D") {
    const auto p = make_linear_1d();
    const auto s = Schedule::constant(1.0, 1.0, 0.25);
    const auto f = tseng_field(p, s, 0.0, scalar(1.0));
    CHECK(f.p(0) == doctest::Approx(0.5));
    CHECK(f.xdot(0) == doctest::Approx(-0.25));
    CHECK(f.residual_fp == doctest::Approx(0.5));
    CHECK(f.lambda_used == 0.25);
    CHECK(tseng_composition(p, {0.25, 1.0, 0.0}, scalar(1.0))(0) == doctest::Approx(-0.25));

    const auto z = tseng_field(p, s, 0.0, scalar(0.0));
    CHECK(z.p(0) == 0.0);
    CHECK(z.xdot(0) == 0.0);
    CHECK(z.residual_fp == 0.0);
}

TEST_CASE("both field forms agree on a 5-D instance") {
    const auto p = make_saddle_point(SaddleSpec{3, 2, 2});
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    Rng rng(17);
    for (int k = 0; k < 50; ++k) {
        const Vector x = 3.0 * gaussian_vector(p.dim(), rng);
        const double t = 10.0 * k;
        const auto two_line = tseng_field(p, s, t, x).xdot;
        const auto composed = tseng_composition(p, field_parameters(p, s, t), x);
        CHECK((two_line - composed).norm() <= 1e-14 * (1.0 + x.norm()) * 10);
    }
}

TEST_CASE("step size at or above 1/L is rejected") {
    const auto p = make_linear_1d();
    CHECK_THROWS_AS(tseng_field(p, Schedule::constant(1.0, 1.0, 0.5), 0.0, scalar(1.0)), PreconditionError);
    CHECK_NOTHROW(tseng_field(p, Schedule::constant(1.0, 1.0, 0.49), 0.0, scalar(1.0)));
}

TEST_CASE("inclusion identity -xdot/lambda = a + V(p)") {
    const auto p = make_saddle_point(SaddleSpec{3, 2, 2});
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    Rng rng(4);
    for (double t : {0.0, 5.0, 50.0}) {
        const auto prm = field_parameters(p, s, t);
        const Vector x = 2.0 * gaussian_vector(p.dim(), rng);
        const auto f = tseng_step(p, prm, x);
        const Vector a = (x - prm.lambda * eval_V(p, prm.eps, prm.beta, x) - f.p) / prm.lambda;
        const Vector rhs = a + eval_V(p, prm.eps, prm.beta, f.p);
        CHECK((-f.xdot / prm.lambda - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("field evaluation is bit-identical on repeat") {
    const auto p = make_gnep_linear(GnepSpec{});
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    const Vector x = Vector::LinSpaced(p.dim(), -1.0, 2.0);
    CHECK(tseng_field(p, s, 3.0, x).xdot == tseng_field(p, s, 3.0, x).xdot);
}

TEST_CASE("Lipschitz probe stays below kappa") {
    const auto p = identity_unit_constants();
    const auto s = Schedule::constant(1.0, 1.0, 1.0 / 6.0);
    const double probe = field_lipschitz_probe(p, s, 0.0, 200, 1);
    CHECK(probe >= 0.0);
    CHECK(probe <= theorem_quantities(s, p.eta(), p.mu(), 0.0).kappa);
    CHECK(theorem_quantities(s, p.eta(), p.mu(), 0.0).kappa == doctest::Approx(1.35401).epsilon(1e-5));
}

TEST_CASE("Lipschitz probe enforces its hypothesis") {
    // 1/eta + beta/mu = 0.1 while lambda eps = 0.45, with lambda L = 0.495 < 1.
    const auto p = make_linear_1d(0.1);
    CHECK_THROWS_AS(field_lipschitz_probe(p, Schedule::constant(1.0, 1.0, 0.45), 0.0, 10, 1), PreconditionError);
    CHECK_NOTHROW(field_lipschitz_probe(p, Schedule::constant(0.05, 1.0, 0.45), 0.0, 10, 1));
}

TEST_CASE("growth probe") {
    const auto p = make_linear_1d();
    const FieldParameters prm{0.25, 1.0, 0.0};
    const auto g1 = growth_probe(p, prm, 200, 3, 1e1);
    const auto g2 = growth_probe(p, prm, 200, 3, 1e2);
    const auto g3 = growth_probe(p, prm, 200, 3, 1e3);
    CHECK(std::isfinite(g3.c_hat));
    CHECK(g3.max_radius == doctest::Approx(1e3));
    CHECK(g3.c_hat == doctest::Approx(g2.c_hat).epsilon(0.1));
    CHECK(g2.c_hat == doctest::Approx(g1.c_hat).epsilon(0.1));
    CHECK(growth_probe(p, prm, 1, 3).c_hat == 0.0);  // only x=0, where F(0)=0
    CHECK_THROWS_AS(growth_probe(p, {0.6, 1.0, 0.0}, 10, 3), PreconditionError);
}

TEST_CASE("growth probe vanishes at an equilibrium") {
    const auto p = make_linear_1d(1.0, 0.0);
    const FieldParameters prm{0.25, 1.0, 0.0};
    CHECK(tseng_step(p, prm, scalar(0.0)).xdot.norm() == 0.0);
}

TEST_CASE("descent and strong monotonicity with the oracle point") {
    const auto p = make_saddle_point(SaddleSpec{5, 5, 3});
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    Rng rng(23);
    for (double t : {0.0, 10.0}) {
        const auto prm = field_parameters(p, s, t);
        const Vector xbar = solve_auxiliary(p, prm.eps, prm.beta, 1e-10, 5'000'000).x_bar;
        const double L = lipschitz_modulus(p.eta(), p.mu(), prm.eps, prm.beta);
        for (int k = 0; k < 10; ++k) {
            const Vector x = xbar + gaussian_vector(p.dim(), rng);
            const auto f = tseng_step(p, prm, x);
            const double lhs = (x - xbar).dot(f.xdot);
            const double rhs = (prm.lambda * L - 1.0) * f.residual_fp * f.residual_fp -
                               prm.lambda * prm.eps * (f.p - xbar).squaredNorm();
            CHECK(lhs <= rhs + 1e-8);
            CHECK((-f.xdot / prm.lambda).dot(f.p - xbar) >= prm.eps * (f.p - xbar).squaredNorm() - 1e-8);
        }
    }
}
