#include <doctest.h>

#include <cmath>
#include <random>

#include "fluxbvp/model.hpp"

using namespace fluxbvp;

TEST_CASE("g_eval on the catalogue") {
    CHECK(g_eval(GSpec::quadratic(0.5), 0.0) == 0.0);
    CHECK(g_eval(GSpec::oracle_cubic(), -0.5) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(g_eval(GSpec::quadratic(0.4), 2.0) == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("g(0) = 0 for every variant") {
    CHECK(g_eval(GSpec::quadratic(0.97), 0.0) == 0.0);
    CHECK(g_eval(GSpec::oracle_cubic(), 0.0) == 0.0);
    CHECK(g_eval(GSpec::polynomial({0.0, 0.0, 1.0, -0.3}), 0.0) == 0.0);
}

TEST_CASE("quadratic variant is exactly beta*x^2") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> bdist(1e-3, 1.0);
    std::uniform_real_distribution<double> xdist(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double beta = bdist(rng);
        const double x = xdist(rng);
        CHECK(g_eval(GSpec::quadratic(beta), x) == beta * (x * x));
    }
}

TEST_CASE("polynomial construction guards") {
    CHECK_THROWS_AS(GSpec::polynomial({}), std::invalid_argument);
    CHECK_THROWS_AS(GSpec::polynomial({1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(GSpec::quadratic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(GSpec::quadratic(-0.5), std::invalid_argument);
    const GSpec p = GSpec::polynomial({0.0, 0.0, 0.5, 0.25});
    CHECK(p(2.0) == doctest::Approx(0.5 * 4 + 0.25 * 8));
}

TEST_CASE("subquadratic check on the standard grids") {
    const std::vector<double> grid{0.1, -0.1, 1.0, -1.0, 10.0, -10.0};

    SUBCASE("beta = 0.5 passes") {
        const auto rep = check_subquadratic(GSpec::quadratic(0.5), grid);
        CHECK(rep.ok());
        CHECK(rep.points_checked == 6);
    }

    SUBCASE("beta < 1 passes on any nonzero grid") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> bdist(1e-6, 1.0 - 1e-12);
        std::uniform_real_distribution<double> xdist(-50.0, 50.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> pts;
            for (int i = 0; i < 32; ++i) {
                double x = xdist(rng);
                if (x == 0.0) x = 1.0;
                pts.push_back(x);
            }
            CHECK(check_subquadratic(GSpec::quadratic(bdist(rng)), pts).ok());
        }
    }

    SUBCASE("beta = 1 with delta margin violates at every point") {
        const auto rep =
            check_subquadratic(GSpec::quadratic(1.0).with_delta_margin(0.1), grid);
        CHECK(rep.violations.size() == grid.size());
        for (const auto& v : rep.violations)
            CHECK(v.kind == SubquadraticViolation::Kind::ExceedsMargin);
    }

    SUBCASE("oracle cubic goes negative at x = 0.5") {
        const auto rep = check_subquadratic(GSpec::oracle_cubic(),
                                            std::vector<double>{0.5});
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].kind == SubquadraticViolation::Kind::NotPositive);
        CHECK(rep.violations[0].gx == doctest::Approx(-0.125));  // 0.25*(1-1.5)
    }

    SUBCASE("x = 0 is skipped") {
        const auto rep = check_subquadratic(GSpec::quadratic(0.5),
                                            std::vector<double>{0.0, 1.0});
        CHECK(rep.ok());
        CHECK(rep.points_checked == 1);
    }

    SUBCASE("default grid spans both signs") {
        const auto grid_pts = default_subquadratic_grid();
        CHECK(grid_pts.size() == 1024);
        CHECK(check_subquadratic(GSpec::quadratic(0.999), grid_pts).ok());
    }
}

TEST_CASE("problem validation") {
    ProblemSpec p;
    p.a = 0.0;
    p.c = -1.0;
    CHECK_NOTHROW(p.validate());
    p.c = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.c = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.c = -1.0;
    p.controls.blowup_threshold = 1e5;  // below the floor
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.controls.blowup_threshold = 1e8;
    p.controls.abs_tol = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("from_samples requires strictly increasing t") {
    ProblemSpec p;
    std::vector<ShootState> good{{0.0, 0.0, 1.0, -1.0}, {1.0, 0.9, 0.8, -0.9}};
    CHECK_NOTHROW(Trajectory::from_samples(p, 1.0, good, {}));
    std::vector<ShootState> bad{{0.0, 0.0, 1.0, -1.0}, {0.0, 0.9, 0.8, -0.9}};
    CHECK_THROWS_AS(Trajectory::from_samples(p, 1.0, bad, {}), std::invalid_argument);
}
