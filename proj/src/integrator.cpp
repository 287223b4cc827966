// Adaptive Dormand-Prince 5(4) integration of the order-one system for
// (f, f', f''), following the coefficient set of Hairer, Norsett & Wanner,
// "Solving Ordinary Differential Equations I" (DOPRI5), including the free
// 4th-order continuous extension.

#include "fluxbvp/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fluxbvp {

Derivative rhs(const ShootState& s, const GSpec& g) {
    return {s.fp, s.fpp, -s.f * s.fpp - g(s.fp)};
}

namespace {

using Vec3 = std::array<double, 3>;

inline Vec3 deriv(const GSpec& g, const Vec3& y) {
    return {y[1], y[2], -y[0] * y[2] - g(y[1])};
}

// Butcher tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct StepResult {
    Vec3 y1;
    Vec3 k7;  // derivative at the new point (FSAL)
    double err;
    std::array<Vec3, 7> k;
};

StepResult attempt_step(const GSpec& g, double t, const Vec3& y, const Vec3& k1,
                        double h, double atol, double rtol) {
    StepResult r;
    Vec3 w;
    auto& k = r.k;
    k[0] = k1;
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * a21 * k[0][i];
    k[1] = deriv(g, w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    k[2] = deriv(g, w);
    for (int i = 0; i < 3; ++i)
        w[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
    k[3] = deriv(g, w);
    for (int i = 0; i < 3; ++i)
        w[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
    k[4] = deriv(g, w);
    for (int i = 0; i < 3; ++i)
        w[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] +
                           a64 * k[3][i] + a65 * k[4][i]);
    k[5] = deriv(g, w);
    for (int i = 0; i < 3; ++i)
        r.y1[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                              a75 * k[4][i] + a76 * k[5][i]);
    k[6] = deriv(g, r.y1);
    r.k7 = k[6];

    double err2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ei = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] +
                               e5 * k[4][i] + e6 * k[5][i] + e7 * k[6][i]);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(r.y1[i]));
        err2 += (ei / sc) * (ei / sc);
    }
    r.err = std::sqrt(err2 / 3.0);
    return r;
}

DenseStep make_dense(double t, double h, const Vec3& y, const Vec3& y1,
                     const std::array<Vec3, 7>& k) {
    DenseStep s;
    s.t0 = t;
    s.h = h;
    s.t_end = t + h;
    for (int i = 0; i < 3; ++i) {
        const double dy = y1[i] - y[i];
        const double bspl = h * k[0][i] - dy;
        s.rc[i][0] = y[i];
        s.rc[i][1] = dy;
        s.rc[i][2] = bspl;
        s.rc[i][3] = dy - h * k[6][i] - bspl;
        s.rc[i][4] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] +
                          d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
    }
    return s;
}

// Hairer's automatic initial step selection.
double initial_step(const GSpec& g, const Vec3& y0, const Vec3& f0, double atol,
                    double rtol, double t_span) {
    auto scnorm = [&](const Vec3& v, const Vec3& ref) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double sc = atol + rtol * std::abs(ref[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / 3.0);
    };
    const double d0 = scnorm(y0, y0);
    const double dd1 = scnorm(f0, y0);
    double h0 = (d0 < 1e-10 || dd1 < 1e-10) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, t_span);
    Vec3 y1;
    for (int i = 0; i < 3; ++i) y1[i] = y0[i] + h0 * f0[i];
    const Vec3 f1 = deriv(g, y1);
    Vec3 df;
    for (int i = 0; i < 3; ++i) df[i] = f1[i] - f0[i];
    const double d2 = scnorm(df, y0) / h0;
    const double dm = std::max(dd1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, t_span});
}

}  // namespace

Trajectory integrate(const ProblemSpec& problem, double b) {
    problem.validate();
    if (!std::isfinite(b)) throw std::invalid_argument("integrate: b must be finite");
    const SolverControls& ctl = problem.controls;
    const GSpec& g = problem.g;
    const double atol = ctl.abs_tol, rtol = ctl.rel_tol;

    Trajectory traj;
    traj.problem = problem;
    traj.b = b;
    traj.samples.push_back({0.0, problem.a, b, problem.c});

    // b = 0 with c < 0 means f' leaves 0 downward immediately.
    if (b <= 0.0) traj.first_downcrossing = 0.0;
    if (b == 0.0 && ctl.stop_at_first_downcrossing) {
        traj.termination = {TerminationKind::ZeroCrossing, 0.0};
        return traj;
    }

    Vec3 y{problem.a, b, problem.c};
    Vec3 k1 = deriv(g, y);
    double t = 0.0;
    double h = initial_step(g, y, k1, atol, rtol, ctl.t_max);
    const double eps = std::numeric_limits<double>::epsilon();

    bool crossing_armed = y[1] > 0.0;
    long accepted = 0;

    while (t < ctl.t_max) {
        bool clipped = false;
        if (t + h >= ctl.t_max) {
            h = ctl.t_max - t;
            clipped = true;
        }

        const StepResult r = attempt_step(g, t, y, k1, h, atol, rtol);
        if (!std::isfinite(r.err) || r.err > 1.0) {
            // Underflow means the controller demands a step below the
            // machine-feasible floor, not that the initial guess was timid.
            const double shrink =
                std::isfinite(r.err)
                    ? std::clamp(0.9 * std::pow(r.err, -0.2), 0.2, 5.0)
                    : 0.2;
            h *= shrink;
            if (h < 16.0 * eps * std::max(1.0, std::abs(t))) {
                traj.step_underflow = true;
                traj.termination = {TerminationKind::ReachedTmax, t};
                return traj;
            }
            continue;
        }

        // Accepted.
        DenseStep dense = make_dense(t, h, y, r.y1, r.k);
        const double t_new = clipped ? ctl.t_max : t + h;
        dense.t_end = t_new;

        // f' = 0 downcrossing inside this step, localized by bisection on the
        // dense interpolant.
        if (crossing_armed && r.y1[1] < 0.0) {
            double lo = t, hi = t_new;
            double flo = y[1];
            double t0 = 0.5 * (lo + hi);
            const double width_floor = 4.0 * eps * std::max(std::abs(t_new), 1.0);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;  // floating resolution
                const double fmid = dense.eval(1, mid);
                t0 = mid;
                if (std::abs(fmid) <= ctl.event_tol && hi - lo <= 2.0 * ctl.event_tol)
                    break;
                if ((fmid >= 0.0) == (flo >= 0.0)) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
                if (hi - lo <= width_floor) break;
            }
            traj.first_downcrossing = t0;
            crossing_armed = false;
            if (ctl.stop_at_first_downcrossing) {
                dense.t_end = t0;
                traj.steps.push_back(dense);
                traj.samples.push_back(
                    {t0, dense.eval(0, t0), dense.eval(1, t0), dense.eval(2, t0)});
                traj.termination = {TerminationKind::ZeroCrossing, t0};
                return traj;
            }
        }

        traj.steps.push_back(dense);
        traj.samples.push_back({t_new, r.y1[0], r.y1[1], r.y1[2]});
        t = t_new;
        y = r.y1;
        k1 = r.k7;  // FSAL

        if (++accepted > 20'000'000) {  // runaway guard, far beyond any sane run
            traj.step_underflow = true;
            traj.termination = {TerminationKind::ReachedTmax, t};
            return traj;
        }

        // Finite-time blow-up drives f' and f'' to infinity together, and
        // only happens after f' has gone negative; while f' stays in [0, b]
        // large transients (e.g. huge shooting slopes) are not blow-up.
        if (y[1] < 0.0 &&
            std::abs(y[1]) + std::abs(y[2]) > ctl.blowup_threshold) {
            traj.termination = {TerminationKind::BlowUp, t};
            return traj;
        }

        h *= std::clamp(0.9 * std::pow(std::max(r.err, 1e-30), -0.2), 0.2, 5.0);
    }

    traj.termination = {TerminationKind::ReachedTmax, t};
    return traj;
}

ShootState sample(const Trajectory& traj, double t) { return traj.at(t); }

}  // namespace fluxbvp
