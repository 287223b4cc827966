#pragma once

#include <vector>

#include "fluxbvp/model.hpp"

namespace fluxbvp {

struct TailFit {
    double mu_hat = 0.0;    // plateau of f (exponential fit only)
    double A_hat = 0.0;     // fitted amplitude
    double rate_hat = 0.0;  // decay rate (exponential) or log-log slope (power)
    double t_start = 0.0;
    double t_end = 0.0;
    double residual_norm = 0.0;  // RMS residual of the fit's regression
};

struct VProfile {
    double b = 0.0;
    // Ordered by decreasing y, starting at y = 1 (t = 0).
    std::vector<double> y;   // (f'/b)^2
    std::vector<double> v;   // f / sqrt(b)
    std::vector<double> vp;  // b^{3/2} / (2 f'')
};

// Residual of the integral identity obtained by multiplying the equation by
// 1 (which=1), f (which=2) or t (which=3) and integrating by parts. Evaluated
// at 64 equally spaced times; the right-hand-side integral uses composite
// Simpson at 8x the accepted-step density on the dense output. Returns
// max |LHS - RHS| / (1 + max |LHS|).
double identity_residuals(const Trajectory& traj, int which);

// Cumulative-in-time quadrature helpers exposed for cross-checks in tests.
double identity_lhs(const Trajectory& traj, int which, double t);
double identity_rhs_integrand(const Trajectory& traj, int which, double t);

// Fits f(t) = mu - A exp(-rate t) on the window where f' is in
// [1e-6, 1e-3]: mu_hat is the plateau of f, rate_hat the median of -f''/f'
// over the window, A_hat a least-squares fit of log(mu_hat - f) against
// -mu_hat t. Requires a Type I trajectory with a plateau.
TailFit fit_exponential_tail(const Trajectory& traj);

// Fits the log-log slope of f over the last decade of time; for a Type I
// unbounded trajectory of the beta-problem the slope estimates 1/(1+beta).
TailFit fit_power_tail(const Trajectory& traj, double beta);

// Change of variables y = (f'/b)^2, v(y) = f/sqrt(b), v'(y) = b^{3/2}/(2 f'').
// Samples are taken log-uniformly in y from 1 down to max(y_min, trajectory
// floor), with the t=0 state mapped exactly to y=1.
VProfile v_transform(const Trajectory& traj, std::size_t n_samples = 2048,
                     double y_min = 1e-6);

// Residual of v'' = v v'^2 / sqrt(y) + 2 beta sqrt(y) v'^3 with v'' from
// three-point central differences on the nonuniform y-grid. Returns
// max |v'' - rhs| / (1 + |rhs|) over y in [1e-4, 1].
double v_ode_residual(const VProfile& profile, double beta);

// Bound checks from the supporting lemmas:
//  (a) a < 0: at the first zero s_b of f (before any f' crossing),
//      f'(s_b) > 3b/4;
//  (b) at the first time t_b with f' = b/2 and f(t_b) >= 0,
//      t_b >= (c + sqrt(c^2 + b^3)) / b^2;
//  (c) Type II: f(t0)^2 <= 2b + a^2 at the crossing time t0.
// Inapplicable checks are reported as skipped.
std::vector<CheckResult> lemma_bound_checks(const Trajectory& traj);

// beta = -(2m+1)/(m+2) for m in (-1, -1/2); throws OutOfRange otherwise.
double map_m_to_beta(double m);

// Residual of f''' + (m+2) f f'' - (2m+1) f'^2 = 0 on the solution rebuilt
// from a beta-problem trajectory via f(s) = f_tilde(k s)/k, k = sqrt(m+2).
// f''' comes from the derivative of the dense interpolant; max over a
// 64-point grid.
double m_form_residual(const Trajectory& traj_beta, double m);

// Residual of the trajectory against its own equation (f''' from the dense
// interpolant); a self-consistency measure of the dense output.
double beta_ode_residual(const Trajectory& traj);

}  // namespace fluxbvp
