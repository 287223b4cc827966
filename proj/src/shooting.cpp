#include "fluxbvp/shooting.hpp"

#include <cmath>
#include <sstream>

#include "fluxbvp/integrator.hpp"

namespace fluxbvp {

namespace {

void require_shootable(const ProblemSpec& problem) {
    if (problem.controls.shoot_override) return;
    if (problem.g.kind() != GKind::Quadratic ||
        !(problem.g.beta() > 0.0 && problem.g.beta() < 1.0))
        throw std::invalid_argument(
            "shooting: the interval structure of the Type I set is only "
            "established for g(x) = beta*x^2 with beta in (0,1); set the "
            "override flag to bisect anyway");
}

// For a < 0, slopes at which f could still be nonpositive when f' = 3b/4 are
// bounded by the positive root of 7 X^2 - 32 a^2 X - 32 a c; seed the upper
// probe there.
double doubling_seed(const ProblemSpec& problem) {
    if (problem.a >= 0.0) return 1.0;
    const double a = problem.a, c = problem.c;
    const double disc = 1024.0 * a * a * a * a + 896.0 * a * c;
    return (32.0 * a * a + std::sqrt(disc)) / 14.0;
}

}  // namespace

std::pair<double, double> bracket(const ProblemSpec& problem) {
    problem.validate();
    require_shootable(problem);

    double b_lo = 0.0;
    {
        const ClassifiedRun low = classify_slope(problem, b_lo);
        if (!low.cls.is_type_two())
            throw InconsistentPredicate(
                "bracket: b = 0 did not classify as Type II");
    }

    double b_hi = std::max(1.0, doubling_seed(problem));
    bool all_type_two = true;
    for (int doublings = 0; doublings <= 60; ++doublings) {
        const ClassifiedRun probe = classify_slope(problem, b_hi);
        if (probe.cls.is_type_one()) return {b_lo, b_hi};
        if (!probe.cls.is_type_two()) {
            all_type_two = false;
            throw InconsistentPredicate(
                "bracket: inconclusive classification at b = " +
                std::to_string(b_hi));
        }
        b_lo = b_hi;
        b_hi *= 2.0;
    }

    std::ostringstream msg;
    msg << "bracket: no Type I slope found after 60 doublings (reached b = "
        << b_lo << ")";
    if (problem.g.kind() == GKind::Quadratic && problem.g.beta() >= 1.0 &&
        problem.a <= 0.0)
        msg << "; beta = 1 with a <= 0 admits no Type I slopes";
    throw BracketFailure(msg.str(), b_lo, all_type_two);
}

BStarResult find_bstar(const ProblemSpec& problem) {
    auto [b_lo, b_hi] = bracket(problem);
    const SolverControls& ctl = problem.controls;

    BStarResult result;
    int iters = 0;
    while (b_hi - b_lo > ctl.bisect_tol) {
        if (iters >= ctl.max_bisect_iters)
            throw MaxIterations("find_bstar: bisection exceeded max_bisect_iters");
        const double mid = 0.5 * (b_lo + b_hi);
        if (mid <= b_lo || mid >= b_hi) break;  // floating resolution
        const ClassifiedRun probe = classify_slope(problem, mid);
        if (probe.cls.is_type_one())
            b_hi = mid;
        else if (probe.cls.is_type_two())
            b_lo = mid;
        else
            throw InconsistentPredicate(
                "find_bstar: inconclusive classification at b = " +
                std::to_string(mid));
        ++iters;
    }

    // The Type I set is closed, so its end of the bracket is the certified one.
    result.b_star = b_hi;
    result.b_lo = b_lo;
    result.b_hi = b_hi;
    result.iterations = iters;

    const Trajectory crit = integrate(problem, b_hi);
    result.mu = crit.samples.back().f;

    const double cab = problem.c + problem.a * result.b_star;
    result.diagnostics.push_back(
        {"c_plus_a_bstar_negative", true, cab < 0.0,
         "c + a*b_star = " + std::to_string(cab)});
    const double bound = std::sqrt(2.0 * result.b_star + problem.a * problem.a);
    result.diagnostics.push_back(
        {"mu_within_borne_bound", true, result.mu <= bound + 1e-3,
         "mu = " + std::to_string(result.mu) + ", bound = " + std::to_string(bound)});
    const Classification crit_cls = classify(crit);
    result.diagnostics.push_back(
        {"plateau_at_b_star", true,
         crit_cls.is_type_one() && crit_cls.bounded_hint,
         "classification of the b_hi trajectory"});
    return result;
}

CriticalTrajectory critical_trajectory(const ProblemSpec& problem,
                                       const BStarResult& result) {
    if (!(result.b_star > 0.0) || !(result.b_hi >= result.b_lo))
        throw std::invalid_argument("critical_trajectory: invalid BStarResult");

    CriticalTrajectory out;
    out.traj = integrate(problem, result.b_star);
    const Classification cls = classify(out.traj);
    if (!cls.is_type_one() || !cls.bounded_hint)
        throw PlateauNotFound(
            "critical_trajectory: no plateau at b_star; tighten bisect_tol or "
            "increase t_max");
    out.mu = out.traj.samples.back().f;

    const double bound =
        std::sqrt(2.0 * result.b_star + problem.a * problem.a) + 1e-3;
    double worst = -1e300;
    for (const ShootState& s : out.traj.samples) worst = std::max(worst, s.f);
    out.bound_check = {"f_below_borne_bound", true, worst <= bound,
                       "max f = " + std::to_string(worst) +
                           ", bound = " + std::to_string(bound)};
    return out;
}

}  // namespace fluxbvp
