#pragma once

#include "fluxbvp/model.hpp"

namespace fluxbvp {

struct Derivative {
    double df = 0.0;
    double dfp = 0.0;
    double dfpp = 0.0;  // f''' = -f f'' - g(f')
};

Derivative rhs(const ShootState& s, const GSpec& g);

// Integrates the shooting IVP from (a, b, c) with an embedded Dormand-Prince
// 5(4) pair and 4th-order dense output. Stops at the first of: t = t_max,
// an f'=0 downcrossing (when stop_at_first_downcrossing), or
// |f'| + |f''| > blowup_threshold once f' has gone negative. A step-size
// underflow truncates the trajectory and sets step_underflow.
Trajectory integrate(const ProblemSpec& problem, double b);

// Dense-output sampling; alias for Trajectory::at.
ShootState sample(const Trajectory& traj, double t);

}  // namespace fluxbvp
