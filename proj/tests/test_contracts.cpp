#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsengflow/contracts.hpp"
#include "tsengflow/problems.hpp"

using namespace tsengflow;

TEST_CASE("box and l1 resolvents are firmly nonexpansive") {
    const Vector lo = Vector::Constant(3, -1.0), hi = Vector::Constant(3, 2.0);
    for (double lambda : {0.1, 1.0, 10.0}) {
        CHECK(check_firm_nonexpansive(resolvent_box(lo, hi), 3, lambda).passed());
        CHECK(check_firm_nonexpansive(resolvent_l1(0.7), 3, lambda).passed());
        CHECK(check_firm_nonexpansive(resolvent_zero(), 3, lambda).passed());
    }
}

TEST_CASE("an expansive map fails firm nonexpansiveness") {
    const ResolventOperator doubling([](double, const Vector& y) { return Vector(2.0 * y); }, "2 Id");
    const auto check = check_firm_nonexpansive(doubling, 2, 1.0);
    CHECK_FALSE(check.passed());
    CHECK(check.violations == check.samples);
    CHECK(check.worst_margin < 0.0);
}

TEST_CASE("a rotation is monotone but not cocoercive") {
    Matrix R(2, 2);
    R << 0, -1, 1, 0;
    const auto F = affine_map(R, Vector::Zero(2), "rotation");
    CHECK(check_monotone(F, 2).passed());
    CHECK(check_lipschitz(F, 2).passed());
    const LipschitzMonotoneMap G([R](const Vector& x) { return Vector(R * x); }, 1.0, 1.0, "rotation");
    CHECK_FALSE(check_cocoercive(G, 2).passed());
}

TEST_CASE("an understated Lipschitz constant is caught") {
    const LipschitzMonotoneMap F([](const Vector& x) { return Vector(3.0 * x); }, 2.0, std::nullopt, "3 Id");
    CHECK_FALSE(check_lipschitz(F, 2).passed());
}

TEST_CASE("a non-monotone map is caught") {
    const LipschitzMonotoneMap F([](const Vector& x) { return Vector(-x); }, 1.0, std::nullopt, "-Id");
    CHECK_FALSE(check_monotone(F, 2).passed());
}

TEST_CASE("V is eps-strongly monotone and L-Lipschitz on the built-in instances") {
    const ProblemInstance problems[] = {make_interval_toy(1, 2), make_linear_1d(2.0, 0.5),
                                        make_saddle_point(SaddleSpec{5, 5, 3}), make_gnep_linear(GnepSpec{})};
    for (const auto& p : problems) {
        for (auto [eps, beta] : {std::pair{1.0, 1.0}, {0.1, 10.0}, {1e-3, 100.0}}) {
            CHECK(check_strong_monotone_V(p, eps, beta).passed());
            CHECK(check_lipschitz_V(p, eps, beta).passed());
        }
    }
}

TEST_CASE("full contract report passes and is seeded") {
    const auto p = make_saddle_point(SaddleSpec{5, 5, 3});
    const auto a = check_problem_contracts(p);
    const auto b = check_problem_contracts(p);
    CHECK(a.passed());
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].worst_margin == b.checks[i].worst_margin);
    CHECK(a.to_text().find("FAIL") == std::string::npos);
}
