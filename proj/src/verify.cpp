#include "fluxbvp/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "fluxbvp/analysis.hpp"
#include "fluxbvp/classify.hpp"
#include "fluxbvp/integrator.hpp"
#include "fluxbvp/rk4_oracle.hpp"
#include "fluxbvp/shooting.hpp"

namespace fluxbvp::verify {

namespace {

constexpr double kBetas[] = {0.25, 0.5, 0.75};
constexpr double kAs[] = {-1.0, 0.0, 1.0};
constexpr double kCs[] = {-1.0, -0.1};

ProblemSpec quadratic_problem(double beta, double a, double c,
                              const SolverControls& ctl) {
    ProblemSpec p;
    p.a = a;
    p.c = c;
    p.g = GSpec::quadratic(beta);
    p.controls = ctl;
    return p;
}

struct SweepRow {
    double b = 0.0;
    Classification::Kind kind = Classification::Kind::Inconclusive;
    bool blowup_confirmed = false;
    int followthrough_escalations = 0;
};

// Shared state across criteria: the critical slopes of the standard matrix
// and the per-entry sweeps are reused by several checks.
struct Ctx {
    SolverControls base;
    std::map<std::tuple<double, double, double>, BStarResult> bstars;
    std::map<std::tuple<double, double, double>, std::vector<SweepRow>> sweeps;

    const BStarResult& bstar(double beta, double a, double c) {
        const auto key = std::make_tuple(beta, a, c);
        auto it = bstars.find(key);
        if (it == bstars.end())
            it = bstars.emplace(key, find_bstar(quadratic_problem(beta, a, c, base)))
                     .first;
        return it->second;
    }

    const std::vector<SweepRow>& sweep(double beta, double a, double c) {
        const auto key = std::make_tuple(beta, a, c);
        auto it = sweeps.find(key);
        if (it != sweeps.end()) return it->second;

        const ProblemSpec problem = quadratic_problem(beta, a, c, base);
        const double b_hi = 2.0 * bstar(beta, a, c).b_star;
        std::vector<SweepRow> rows;
        rows.reserve(64);
        for (int i = 0; i < 64; ++i) {
            SweepRow row;
            row.b = -1.0 + (b_hi + 1.0) * static_cast<double>(i) / 63;
            const ClassifiedRun run = classify_slope(problem, row.b);
            row.kind = run.cls.kind;
            if (run.cls.is_type_two()) {
                const FollowThroughReport ft = blowup_followthrough(run.traj);
                row.blowup_confirmed = ft.confirmed_blowup;
                row.followthrough_escalations = ft.escalations;
            }
            rows.push_back(row);
        }
        return sweeps.emplace(key, std::move(rows)).first->second;
    }
};

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// 1. Exact-solution oracle: f(t) = sqrt(1-t) for the cubic g.
Outcome crit_exact_oracle(Ctx& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    ProblemSpec p;
    p.a = 1.0;
    p.c = -0.25;
    p.g = GSpec::oracle_cubic();
    p.controls = ctx.base;
    const Trajectory traj = integrate(p, -0.5);
    double worst = 0.0;
    for (int i = 0; i <= 900; ++i) {
        const double t = 0.9 * i / 900.0;
        const ShootState s = traj.at(t);
        const double root = std::sqrt(1.0 - t);
        worst = std::max(worst, std::abs(s.f - root));
        worst = std::max(worst, std::abs(s.fp + 0.5 / root));
    }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-7 && elapsed < 1.0,
            "max error " + fmt(worst) + " (limit 1e-7), " + fmt(elapsed) + " s"};
}

// 2. First integral for g(x) = x^2.
Outcome crit_first_integral(Ctx& ctx) {
    const double cases[][3] = {{-1, 2, -1}, {0, 1, -0.5}, {1, 0.5, -1}};
    double worst = 0.0;
    double slowest = 0.0;
    for (const auto& abc : cases) {
        const auto t0 = std::chrono::steady_clock::now();
        const double a = abc[0], b = abc[1], c = abc[2];
        const ProblemSpec p = quadratic_problem(1.0, a, c, ctx.base);
        const Trajectory traj = integrate(p, b);
        const double t_end = traj.final_time();
        for (int i = 0; i <= 512; ++i) {
            const double t = t_end * i / 512.0;
            const ShootState s = traj.at(t);
            const double drift = s.fp + 0.5 * s.f * s.f - b - 0.5 * a * a -
                                 (c + a * b) * t;
            worst = std::max(worst, std::abs(drift));
        }
        slowest = std::max(slowest, seconds_since(t0));
    }
    return {worst <= 1e-8 && slowest < 1.0,
            "max drift " + fmt(worst) + " (limit 1e-8), slowest " + fmt(slowest) + " s"};
}

// 3. Identity residuals over the standard matrix.
Outcome crit_identity_suite(Ctx& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    int entries = 0;
    for (double beta : kBetas)
        for (double a : kAs)
            for (double c : kCs) {
                const double bs = ctx.bstar(beta, a, c).b_star;
                const ProblemSpec p = quadratic_problem(beta, a, c, ctx.base);
                for (double b : {0.5, bs, bs + 1.0}) {
                    const Trajectory traj = integrate(p, b);
                    for (int which = 1; which <= 3; ++which)
                        worst = std::max(worst, identity_residuals(traj, which));
                    ++entries;
                }
            }
    const double elapsed = seconds_since(t0);
    return {worst <= 1e-6 && elapsed < 30.0,
            std::to_string(entries) + " trajectories, max residual " + fmt(worst) +
                " (limit 1e-6), " + fmt(elapsed) + " s"};
}

// 4. Critical slope against the fixed-step oracle.
Outcome crit_critical_slope(Ctx& ctx) {
    const auto t0 = std::chrono::steady_clock::now();
    const ProblemSpec p = quadratic_problem(0.5, 0.0, -1.0, ctx.base);
    const BStarResult bs = ctx.bstar(0.5, 0.0, -1.0);
    const bool width_ok = bs.b_hi - bs.b_lo <= ctx.base.bisect_tol;
    const bool iters_ok = bs.iterations <= 60;
    const bool flip_ok = classify_slope(p, bs.b_lo).cls.is_type_two() &&
                         classify_slope(p, bs.b_hi).cls.is_type_one();
    const double ref = oracle::rk4_bstar(p.g, p.a, p.c, /*b_max=*/4.0,
                                         /*grid_n=*/10000, /*h=*/1e-3,
                                         /*t_max=*/100.0, /*tol=*/1e-10);
    const double diff = std::abs(bs.b_star - ref);
    const double elapsed = seconds_since(t0);
    return {width_ok && iters_ok && flip_ok && diff <= 1e-6 && elapsed < 10.0,
            "b_star = " + fmt(bs.b_star) + ", oracle = " + fmt(ref) + ", |diff| = " +
                fmt(diff) + ", " + std::to_string(bs.iterations) + " iterations, " +
                fmt(elapsed) + " s"};
}

// 5. c + a b_star < 0 across the matrix.
Outcome crit_sign_constraint(Ctx& ctx) {
    for (double beta : kBetas)
        for (double a : kAs)
            for (double c : kCs) {
                const double bs = ctx.bstar(beta, a, c).b_star;
                if (!(c + a * bs < 0.0))
                    return {false, "c + a b_star = " + fmt(c + a * bs) + " at beta=" +
                                       fmt(beta) + ", a=" + fmt(a) + ", c=" + fmt(c)};
                if (a > 0.0 && !(bs < -c / a))
                    return {false, "b_star = " + fmt(bs) + " >= -c/a at beta=" +
                                       fmt(beta) + ", a=" + fmt(a) + ", c=" + fmt(c)};
            }
    return {true, "18 matrix entries"};
}

// 6. Monotone dichotomy along 64-point sweeps.
Outcome crit_monotone_dichotomy(Ctx& ctx) {
    for (double beta : kBetas)
        for (double a : kAs)
            for (double c : kCs) {
                const auto& rows = ctx.sweep(beta, a, c);
                double last_type_one = -1e300;
                for (const SweepRow& row : rows) {
                    if (row.kind == Classification::Kind::Inconclusive)
                        return {false, "inconclusive at b=" + fmt(row.b) + ", beta=" +
                                           fmt(beta) + ", a=" + fmt(a) + ", c=" + fmt(c)};
                    if (row.kind == Classification::Kind::TypeI)
                        last_type_one = std::max(last_type_one, row.b);
                    if (row.kind == Classification::Kind::TypeII &&
                        row.b > last_type_one && last_type_one != -1e300)
                        return {false, "Type II at b=" + fmt(row.b) +
                                           " above a Type I verdict, beta=" + fmt(beta) +
                                           ", a=" + fmt(a) + ", c=" + fmt(c)};
                }
            }
    return {true, "18 sweeps x 64 slopes"};
}

// 7. Bracket failure for beta = 1, a <= 0.
Outcome crit_b1_empty(Ctx& ctx) {
    ProblemSpec p = quadratic_problem(1.0, -1.0, -1.0, ctx.base);
    p.controls.shoot_override = true;
    try {
        (void)bracket(p);
    } catch (const BracketFailure& e) {
        const bool ok = e.b_reached >= 1e4 && e.all_type_two;
        return {ok, "reached b = " + fmt(e.b_reached) +
                        (e.all_type_two ? ", every probe Type II" : ", non-Type-II probe seen")};
    } catch (const std::exception& e) {
        return {false, std::string("unexpected error: ") + e.what()};
    }
    return {false, "bracket unexpectedly succeeded"};
}

// 8. Exponential tail at the certified critical slope.
Outcome crit_exponential_tail(Ctx& ctx) {
    const ProblemSpec p = quadratic_problem(0.5, 0.0, -1.0, ctx.base);
    const BStarResult bs = ctx.bstar(0.5, 0.0, -1.0);
    const CriticalTrajectory crit = critical_trajectory(p, bs);
    const TailFit fit = fit_exponential_tail(crit.traj);
    const double rel = std::abs(fit.rate_hat - fit.mu_hat) / fit.mu_hat;
    const bool ok = rel <= 0.05 && crit.bound_check.passed;
    return {ok, "mu = " + fmt(fit.mu_hat) + ", rate = " + fmt(fit.rate_hat) +
                    ", rel diff = " + fmt(rel) + "; bound check " +
                    (crit.bound_check.passed ? "passed" : crit.bound_check.details)};
}

// 9. Power-law tail above the critical slope.
Outcome crit_power_tail(Ctx& ctx) {
    std::string detail;
    for (double beta : kBetas) {
        const auto t0 = std::chrono::steady_clock::now();
        const double bs = ctx.bstar(beta, 0.0, -1.0).b_star;
        ProblemSpec p = quadratic_problem(beta, 0.0, -1.0, ctx.base);
        p.controls.t_max = 2000.0;
        const Trajectory traj = integrate(p, bs + 1.0);
        const TailFit fit = fit_power_tail(traj, beta);
        const double target = 1.0 / (1.0 + beta);
        const double err = std::abs(fit.rate_hat - target);
        const double elapsed = seconds_since(t0);
        detail += "beta=" + fmt(beta) + ": slope " + fmt(fit.rate_hat) + " vs " +
                  fmt(target) + " (err " + fmt(err) + ", " + fmt(elapsed) + " s); ";
        if (!(err <= 0.03) || !(elapsed < 30.0)) return {false, detail};
    }
    return {true, detail};
}

// 10. v-transform of the critical trajectory.
Outcome crit_v_transform(Ctx& ctx) {
    const ProblemSpec p = quadratic_problem(0.5, 0.0, -1.0, ctx.base);
    const BStarResult bs = ctx.bstar(0.5, 0.0, -1.0);
    const CriticalTrajectory crit = critical_trajectory(p, bs);
    const VProfile prof = v_transform(crit.traj);

    const double b = bs.b_star;
    const double v1_err = std::abs(prof.v.front() - p.a / std::sqrt(b));
    const double vp1_err =
        std::abs(prof.vp.front() - b * std::sqrt(b) / (2.0 * p.c));
    const bool vp_negative =
        std::all_of(prof.vp.begin(), prof.vp.end(), [](double v) { return v < 0.0; });
    const double res = v_ode_residual(prof, 0.5);
    const bool ok = v1_err <= 1e-8 && vp1_err <= 1e-8 && vp_negative && res <= 1e-3;
    return {ok, "v(1) err " + fmt(v1_err) + ", v'(1) err " + fmt(vp1_err) +
                    ", v' < 0 " + (vp_negative ? "everywhere" : "VIOLATED") +
                    ", equation residual " + fmt(res) + " (limit 1e-3)"};
}

// 11. m <-> beta correspondence.
Outcome crit_m_correspondence(Ctx& ctx) {
    if (map_m_to_beta(-0.75) != 0.4)
        return {false, "map_m_to_beta(-0.75) != 0.4 exactly"};
    std::string detail = "map(-0.75) = 0.4 exactly; ";
    for (double m : {-0.75, -0.9})
        for (double a : {0.0, 1.0}) {
            const double k = std::sqrt(m + 2.0);
            const double beta = map_m_to_beta(m);
            const ProblemSpec p = quadratic_problem(beta, a * k, -1.0 / k, ctx.base);
            const BStarResult bs = find_bstar(p);
            const Trajectory traj = integrate(p, bs.b_star);
            const double res = m_form_residual(traj, m);
            detail += "m=" + fmt(m) + ",a=" + fmt(a) + ": res " + fmt(res) + "; ";
            if (!(res <= 1e-7)) return {false, detail};
        }
    return {true, detail};
}

// 12. Every Type II sweep entry blows up in finite time.
Outcome crit_type_two_blowup(Ctx& ctx) {
    int type_two = 0;
    for (double beta : kBetas)
        for (double a : kAs)
            for (double c : kCs)
                for (const SweepRow& row : ctx.sweep(beta, a, c))
                    if (row.kind == Classification::Kind::TypeII) {
                        ++type_two;
                        if (!row.blowup_confirmed || row.followthrough_escalations > 1)
                            return {false,
                                    "no blow-up at b=" + fmt(row.b) + ", beta=" +
                                        fmt(beta) + ", a=" + fmt(a) + ", c=" + fmt(c)};
                    }
    return {true, std::to_string(type_two) + " Type II runs all reached blow-up"};
}

struct CriterionDef {
    int id;
    const char* name;
    Outcome (*fn)(Ctx&);
};

const CriterionDef kCriteria[] = {
    {1, "exact-solution oracle", crit_exact_oracle},
    {2, "beta=1 first integral", crit_first_integral},
    {3, "identity suite", crit_identity_suite},
    {4, "critical slope vs oracle", crit_critical_slope},
    {5, "sign constraint c + a*b_star < 0", crit_sign_constraint},
    {6, "monotone dichotomy", crit_monotone_dichotomy},
    {7, "empty Type I set obstruction", crit_b1_empty},
    {8, "exponential tail at b_star", crit_exponential_tail},
    {9, "power-law tail above b_star", crit_power_tail},
    {10, "v-transform", crit_v_transform},
    {11, "m-correspondence", crit_m_correspondence},
    {12, "Type II blow-up", crit_type_two_blowup},
};

}  // namespace

std::vector<std::string> criteria_names() {
    std::vector<std::string> names;
    for (const CriterionDef& c : kCriteria)
        names.push_back(std::to_string(c.id) + ". " + c.name);
    return names;
}

std::vector<CriterionResult> run_all(const Options& opts, std::ostream& log) {
    Ctx ctx;
    ctx.base = opts.base;
    std::vector<CriterionResult> results;
    for (const CriterionDef& def : kCriteria) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), def.id) == opts.only.end())
            continue;
        CriterionResult res;
        res.id = def.id;
        res.name = def.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Outcome out = def.fn(ctx);
            res.passed = out.passed;
            res.detail = out.detail;
        } catch (const std::exception& e) {
            res.passed = false;
            res.detail = std::string("exception: ") + e.what();
        }
        res.seconds = seconds_since(t0);
        log << (res.passed ? "[PASS] " : "[FAIL] ") << res.id << " " << res.name
            << " - " << res.detail << " [" << fmt(res.seconds) << " s]\n";
        results.push_back(std::move(res));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult& r) { return r.passed; });
}

}  // namespace fluxbvp::verify
