#pragma once

#include "fluxbvp/model.hpp"

namespace fluxbvp::oracle {

// Fixed-step classical RK4 reference integrator. Deliberately independent of
// the adaptive path: own stepping, own classification, no dense output, no
// events. Used to cross-check the production solver.

// State at exactly t_target (last step shortened to land on it).
ShootState rk4_at(const GSpec& g, double a, double c, double b, double h,
                  double t_target);

// True when f' stays positive up to t_max; stops early at the first f' < 0.
bool rk4_is_type_one(const GSpec& g, double a, double c, double b, double h,
                     double t_max);

// Critical slope by an ascending grid scan (grid_n points over (0, b_max])
// to find the first Type I slope, then bisection down to tol.
double rk4_bstar(const GSpec& g, double a, double c, double b_max, int grid_n,
                 double h, double t_max, double tol);

// State of f''' + (m+2) f f'' - (2m+1) f'^2 = 0 from (a, b, -1) at t_target.
ShootState rk4_m_equation_at(double m, double a, double b, double h,
                             double t_target);

}  // namespace fluxbvp::oracle
