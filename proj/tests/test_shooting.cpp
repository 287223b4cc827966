#include <doctest.h>

#include <cmath>

#include "fluxbvp/integrator.hpp"
#include "fluxbvp/rk4_oracle.hpp"
#include "fluxbvp/shooting.hpp"

using namespace fluxbvp;

namespace {

ProblemSpec quad_problem(double beta, double a, double c) {
    ProblemSpec p;
    p.a = a;
    p.c = c;
    p.g = GSpec::quadratic(beta);
    return p;
}

}  // namespace

TEST_CASE("bracket surrounds the flip") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const auto [b_lo, b_hi] = bracket(p);
    CHECK(b_lo >= 0.0);
    CHECK(b_hi > b_lo);
    CHECK(classify_slope(p, b_lo).cls.is_type_two());
    CHECK(classify_slope(p, b_hi).cls.is_type_one());
}

TEST_CASE("bracket failure when the Type I set is empty") {
    ProblemSpec p = quad_problem(1.0, -1.0, -1.0);
    p.controls.shoot_override = true;
    CHECK_THROWS_AS((void)bracket(p), BracketFailure);
    try {
        (void)bracket(p);
    } catch (const BracketFailure& e) {
        CHECK(e.b_reached >= 1e4);
        CHECK(e.all_type_two);
    }
}

TEST_CASE("shooting refuses beta outside (0,1) without the override") {
    const ProblemSpec p = quad_problem(1.0, -1.0, -1.0);
    CHECK_THROWS_AS((void)bracket(p), std::invalid_argument);
    ProblemSpec poly = p;
    poly.g = GSpec::polynomial({0.0, 0.0, 0.5});
    CHECK_THROWS_AS((void)bracket(poly), std::invalid_argument);
}

TEST_CASE("seed for a < 0 is the positive root of 7X^2 - 32a^2X - 32ac") {
    // The doubling start must not be below 1; for a = -1, c = -1 the root is
    // (32 + sqrt(1024 + 896))/14.
    const double root = (32.0 + std::sqrt(1920.0)) / 14.0;
    CHECK(root == doctest::Approx(5.41556).epsilon(1e-5));
    const ProblemSpec p = quad_problem(0.5, -1.0, -1.0);
    const auto [b_lo, b_hi] = bracket(p);
    CHECK(b_hi <= std::max(1.0, root) * 2.0 + 1e-12);  // found within one doubling
}

TEST_CASE("find_bstar converges and satisfies the structural checks") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const auto [w_lo, w_hi] = bracket(p);
    const BStarResult res = find_bstar(p);

    CHECK(res.b_star > 0.0);
    CHECK(res.b_star == res.b_hi);
    CHECK(res.b_hi - res.b_lo <= p.controls.bisect_tol);
    CHECK(res.b_lo < res.b_star);
    const int bound = static_cast<int>(
        std::ceil(std::log2((w_hi - w_lo) / p.controls.bisect_tol)));
    CHECK(res.iterations <= bound);
    CHECK(p.c + p.a * res.b_star < 0.0);
    CHECK(res.mu > 0.0);
    CHECK(res.mu <= std::sqrt(2.0 * res.b_star + p.a * p.a) + 1e-3);
    for (const CheckResult& chk : res.diagnostics) CHECK(chk.passed);
}

TEST_CASE("trivial bracket returns the upper end with zero iterations") {
    ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    p.controls.bisect_tol = 64.0;  // wider than any initial bracket
    const BStarResult res = find_bstar(p);
    CHECK(res.iterations == 0);
    CHECK(res.b_star == res.b_hi);
}

TEST_CASE("a > 0 forces b_star below -c/a") {
    const ProblemSpec p = quad_problem(0.5, 1.0, -1.0);
    const BStarResult res = find_bstar(p);
    CHECK(res.b_star < 1.0);
    CHECK(p.c + p.a * res.b_star < 0.0);
}

TEST_CASE("b_star is stable under 10x tighter integration tolerances") {
    ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const BStarResult base = find_bstar(p);
    p.controls.abs_tol /= 10.0;
    p.controls.rel_tol /= 10.0;
    const BStarResult tight = find_bstar(p);
    CHECK(std::abs(tight.b_star - base.b_star) < 10.0 * p.controls.bisect_tol);
}

TEST_CASE("critical trajectory plateau and bound") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const BStarResult res = find_bstar(p);
    const CriticalTrajectory crit = critical_trajectory(p, res);

    CHECK(crit.mu > 0.0);
    CHECK(crit.mu <= std::sqrt(2.0 * res.b_star) + 1e-3);
    CHECK(crit.bound_check.passed);

    // The plateau agrees with a fixed-step run at the certified slope.
    const ShootState ref = oracle::rk4_at(p.g, p.a, p.c, res.b_star, 1e-3, 100.0);
    CHECK(crit.mu == doctest::Approx(ref.f).epsilon(1e-3));
}

TEST_CASE("plateau not found when the bracket is hopeless") {
    ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const BStarResult res = find_bstar(p);
    BStarResult off = res;
    off.b_star = res.b_star + 0.5;  // unbounded side, no plateau by t_max
    CHECK_THROWS_AS((void)critical_trajectory(p, off), PlateauNotFound);
}
