#include <doctest.h>

#include <cmath>

#include "fluxbvp/classify.hpp"
#include "fluxbvp/integrator.hpp"
#include "fluxbvp/rk4_oracle.hpp"

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

TEST_CASE("b = 0 is Type II immediately") {
    const ClassifiedRun run = classify_slope(quad_problem(0.5, 0.0, -1.0), 0.0);
    CHECK(run.cls.is_type_two());
    CHECK(run.cls.t0 == 0.0);
}

TEST_CASE("beta = 1 with a <= 0 is Type II even for large slopes") {
    const ClassifiedRun run = classify_slope(quad_problem(1.0, -1.0, -1.0), 5.0);
    CHECK(run.cls.is_type_two());
}

TEST_CASE("large slope is Type I, confirmed by the fixed-step reference") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    const ClassifiedRun run = classify_slope(p, 10.0);
    CHECK(run.cls.is_type_one());
    CHECK(oracle::rk4_is_type_one(p.g, p.a, p.c, 10.0, 1e-3, 100.0));
}

TEST_CASE("Type I trajectories keep f' positive and f eventually positive") {
    for (double a : {-1.0, 0.0, 1.0}) {
        const ClassifiedRun run = classify_slope(quad_problem(0.5, a, -1.0), 8.0);
        REQUIRE(run.cls.is_type_one());
        const auto& samples = run.traj.samples;
        for (const ShootState& s : samples) CHECK(s.fp > 0.0);
        for (std::size_t i = 3 * samples.size() / 4; i < samples.size(); ++i)
            CHECK(samples[i].f > 0.0);
    }
}

TEST_CASE("sweep dichotomy and monotone structure") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);
    bool seen_type_one = false;
    for (int i = 0; i < 64; ++i) {
        const double b = -2.0 + (10.0 + 2.0) * i / 63.0;
        const ClassifiedRun run = classify_slope(p, b);
        CHECK(run.cls.kind != Classification::Kind::Inconclusive);
        CHECK(run.escalations <= 1);
        if (run.cls.is_type_one()) seen_type_one = true;
        if (seen_type_one) CHECK(!run.cls.is_type_two());
    }
    CHECK(seen_type_one);
}

TEST_CASE("blow-up follow-through") {
    const ProblemSpec p = quad_problem(0.5, 0.0, -1.0);

    SUBCASE("b = 0 blows up in finite time") {
        const Trajectory traj = integrate(p, 0.0);
        const FollowThroughReport report = blowup_followthrough(traj);
        CHECK(report.precondition_ok);
        CHECK(report.confirmed_blowup);
        REQUIRE(report.Tb_est.has_value());
        CHECK(*report.Tb_est > 0.0);
        CHECK(std::isfinite(*report.Tb_est));
    }

    SUBCASE("beta = 1 case blows up too") {
        const Trajectory traj = integrate(quad_problem(1.0, -1.0, -1.0), 5.0);
        const FollowThroughReport report = blowup_followthrough(traj);
        CHECK(report.precondition_ok);
        CHECK(report.confirmed_blowup);
    }

    SUBCASE("Type I input is a precondition violation") {
        const Trajectory traj = integrate(p, 10.0);
        const FollowThroughReport report = blowup_followthrough(traj);
        CHECK(!report.precondition_ok);
        CHECK(!report.confirmed_blowup);
    }
}

TEST_CASE("bounded hint distinguishes plateau from growth") {
    ProblemSpec p = quad_problem(0.5, 0.0, -1.0);

    // Far above the critical slope f grows like a power law: Type I, no hint.
    const ClassifiedRun grow = classify_slope(p, 10.0);
    REQUIRE(grow.cls.is_type_one());
    CHECK(!grow.cls.bounded_hint);
}
