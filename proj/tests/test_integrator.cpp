#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsengflow/integrator.hpp"
#include "tsengflow/oracle.hpp"
#include "tsengflow/problems.hpp"

#include <cmath>
#include <vector>

using namespace tsengflow;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

double end_value(const ProblemInstance& p, const Schedule& s, Method m, double step) {
    IntegratorConfig c;
    c.method = m;
    c.t_end = 1.0;
    c.step = step;
    c.record_stride = 1'000'000;
    c.initial_point = scalar(1.0);
    return integrate(p, s, c).back().x(0);
}

}  // namespace

TEST_CASE("method names round-trip") {
    CHECK(method_from_string("rk4") == Method::RK4);
    CHECK(method_from_string("euler") == Method::Euler);
    CHECK(to_string(Method::RK4) == "rk4");
    CHECK_THROWS_AS(method_from_string("heun"), ContractError);
}

TEST_CASE("equilibrium start stays put under a constant schedule") {
    const auto p = make_linear_1d(1.0, 0.0);
    const auto s = Schedule::constant(1.0, 1.0, 0.25);
    IntegratorConfig c;
    c.t_end = 5.0;
    c.step = 0.1;
    c.initial_point = scalar(0.0);
    for (const auto& sample : integrate(p, s, c).samples) CHECK(sample.x(0) == 0.0);
}

TEST_CASE("recording layout") {
    const auto p = make_interval_toy(1, 2);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, 1, 1);
    IntegratorConfig c;
    c.t_end = 1.05;
    c.step = 0.1;
    c.record_stride = 3;
    c.initial_point = scalar(0.0);
    const auto traj = integrate(p, s, c);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.front().x(0) == 0.0);
    CHECK(traj.back().t == doctest::Approx(1.05));
    for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    for (const auto& smp : traj.samples) {
        CHECK(smp.feasibility_gap == doctest::Approx(p.B()(smp.x).norm()));
        CHECK(smp.eps == doctest::Approx(s.eps(smp.t)));
        CHECK(smp.beta == doctest::Approx(s.beta(smp.t)));
        CHECK(smp.lambda == doctest::Approx(s.lambda(smp.t)));
        CHECK_FALSE(smp.dist_oracle.has_value());
    }
    CHECK(traj.samples.front().feasibility_gap == doctest::Approx(1.0));
}

TEST_CASE("invalid configurations are rejected") {
    const auto p = make_interval_toy(1, 2);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, 1, 1);
    IntegratorConfig c;
    c.initial_point = scalar(0.0);
    c.step = 2.0;
    CHECK_THROWS_AS(integrate(p, s, c), ContractError);
    c.step = 0.1;
    c.record_stride = 0;
    CHECK_THROWS_AS(integrate(p, s, c), ContractError);
    c.record_stride = 1;
    c.initial_point = Vector::Zero(2);
    CHECK_THROWS_AS(integrate(p, s, c), ContractError);
}

TEST_CASE("determinism") {
    const auto p = make_saddle_point(SaddleSpec{5, 5, 3});
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    IntegratorConfig c;
    c.t_end = 5.0;
    c.initial_point = Vector::Constant(p.dim(), 2.0);
    const auto a = integrate(p, s, c), b = integrate(p, s, c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.samples[i].x == b.samples[i].x);
}

TEST_CASE("divergence is reported with the last finite time") {
    // D = -x is not monotone, so the flow grows like exp(t).
    const LipschitzMonotoneMap anti([](const Vector& x) { return Vector(-x); }, 1.0, std::nullopt, "-Id");
    const ProblemInstance p("anti", 1, resolvent_zero(), anti,
                            penalty_from_projection([](const Vector& x) { return x; }), 1.0, 1.0);
    const auto s = Schedule::constant(1e-3, 1e-3, 0.4);
    IntegratorConfig c;
    c.t_end = 1e4;
    c.step = 0.5;
    c.initial_point = scalar(1.0);
    try {
        integrate(p, s, c);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.last_finite_t() > 0.0);
        CHECK(e.last_finite_t() < 1e4);
    }
}

TEST_CASE("observed order on the linear instance") {
    const auto p = make_linear_1d(1.0, 0.3);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, p.eta(), p.mu());
    const double ref = end_value(p, s, Method::RK4, 1e-5);
    auto order = [&](Method m, double h) {
        const double e1 = std::abs(end_value(p, s, m, h) - ref);
        const double e2 = std::abs(end_value(p, s, m, h / 2) - ref);
        return std::log2(e1 / e2);
    };
    CHECK(order(Method::RK4, 0.1) >= 3.5);
    CHECK(order(Method::RK4, 0.1) <= 4.5);
    CHECK(order(Method::Euler, 0.01) >= 0.8);
    CHECK(order(Method::Euler, 0.01) <= 1.2);
}

TEST_CASE("oracle distance attachment") {
    const auto p = make_interval_toy(1, 2);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, 1, 1);
    IntegratorConfig c;
    c.t_end = 2.0;
    c.step = 0.01;
    c.record_stride = 20;
    c.initial_point = scalar(0.5);  // x_bar(eps(0), beta(0)) = 1/2
    auto traj = integrate(p, s, c);
    const auto path = oracle_path(p, traj, 1e-10);
    REQUIRE(path.size() == traj.size());
    traj = attach_oracle_distance(std::move(traj), path);
    CHECK(*traj.samples.front().dist_oracle == doctest::Approx(0.0).epsilon(1e-9));
    for (const auto& smp : traj.samples) {
        REQUIRE(smp.dist_oracle.has_value());
        CHECK(*smp.dist_oracle >= 0.0);
    }
    CHECK_THROWS_AS(attach_oracle_distance(traj, std::span(path).first(1)), ContractError);
}

TEST_CASE("interval toy tracks the regularized path") {
    const auto p = make_interval_toy(1, 2);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, 1, 1);
    IntegratorConfig c;
    c.t_end = 200.0;
    c.step = 0.01;
    c.record_stride = 100;
    c.initial_point = scalar(0.0);
    auto traj = integrate(p, s, c);
    traj = attach_oracle_distance(std::move(traj), oracle_path(p, traj, 1e-10));
    CHECK(traj.back().residual_fp < 1e-3);
    CHECK(*traj.back().dist_oracle < 1e-2);
    const std::size_t start = traj.size() * 3 / 4;
    for (std::size_t i = start + 1; i < traj.size(); ++i) {
        CHECK(*traj.samples[i].dist_oracle <= *traj.samples[i - 1].dist_oracle + 1e-6);
    }
}

TEST_CASE("interval toy end state at t=200 matches the closed-form path point") {
    const auto p = make_interval_toy(1, 2);
    const auto s = Schedule::power_law({1, 0.1, 0.1, 0.5}, 1, 1);
    IntegratorConfig c;
    c.t_end = 200.0;
    c.step = 0.01;
    c.record_stride = 100;
    c.initial_point = scalar(0.0);
    const auto traj = integrate(p, s, c);
    const double eps = s.eps(200.0), beta = s.beta(200.0);
    const double x_bar = beta / (eps + beta);
    CHECK(x_bar == doctest::Approx(0.8308).epsilon(1e-3));
    CHECK(std::abs(traj.back().x(0) - x_bar) < 1e-2);
    CHECK(traj.back().feasibility_gap == doctest::Approx(1.0 - traj.back().x(0)));
}
