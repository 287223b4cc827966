#pragma once

#include <utility>

#include "fluxbvp/classify.hpp"
#include "fluxbvp/model.hpp"

namespace fluxbvp {

// Finds (b_lo, b_hi) with classify(b_lo) = Type II and classify(b_hi) =
// Type I. b_lo starts at 0; b_hi doubles from max(1, seed), where for a < 0
// the seed is the positive root of 7 X^2 - 32 a^2 X - 32 a c (slopes below it
// cannot be Type I candidates). Throws BracketFailure after 60 doublings.
std::pair<double, double> bracket(const ProblemSpec& problem);

// Bisection on the Type I / Type II predicate down to bisect_tol. Returns the
// upper end as b_star: the Type I side is the certified one because the set
// of Type I slopes is closed. mu is the plateau of f at b_star.
BStarResult find_bstar(const ProblemSpec& problem);

struct CriticalTrajectory {
    Trajectory traj;
    double mu = 0.0;
    // f(t) <= sqrt(2 b_star + a^2) + 1e-3 along the trajectory.
    CheckResult bound_check;
};

// Integrates at b_star over the full horizon and verifies the plateau.
// Throws PlateauNotFound when f has not flattened by t_max.
CriticalTrajectory critical_trajectory(const ProblemSpec& problem,
                                       const BStarResult& result);

}  // namespace fluxbvp
