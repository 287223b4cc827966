#include "fluxbvp/rk4_oracle.hpp"

#include <array>
#include <cmath>

namespace fluxbvp::oracle {

namespace {

using Vec3 = std::array<double, 3>;

template <typename Rhs>
Vec3 rk4_step(const Rhs& f, const Vec3& y, double h) {
    const Vec3 k1 = f(y);
    Vec3 w;
    for (int i = 0; i < 3; ++i) w[i] = y[i] + 0.5 * h * k1[i];
    const Vec3 k2 = f(w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + 0.5 * h * k2[i];
    const Vec3 k3 = f(w);
    for (int i = 0; i < 3; ++i) w[i] = y[i] + h * k3[i];
    const Vec3 k4 = f(w);
    Vec3 out;
    for (int i = 0; i < 3; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

template <typename Rhs>
ShootState run_to(const Rhs& f, Vec3 y, double h, double t_target) {
    double t = 0.0;
    while (t < t_target) {
        const double step = std::min(h, t_target - t);
        y = rk4_step(f, y, step);
        t += step;
    }
    return {t_target, y[0], y[1], y[2]};
}

}  // namespace

ShootState rk4_at(const GSpec& g, double a, double c, double b, double h,
                  double t_target) {
    auto f = [&g](const Vec3& y) -> Vec3 {
        return {y[1], y[2], -y[0] * y[2] - g(y[1])};
    };
    return run_to(f, {a, b, c}, h, t_target);
}

bool rk4_is_type_one(const GSpec& g, double a, double c, double b, double h,
                     double t_max) {
    auto f = [&g](const Vec3& y) -> Vec3 {
        return {y[1], y[2], -y[0] * y[2] - g(y[1])};
    };
    Vec3 y{a, b, c};
    if (y[1] <= 0.0) return false;
    double t = 0.0;
    while (t < t_max) {
        const double step = std::min(h, t_max - t);
        y = rk4_step(f, y, step);
        t += step;
        if (y[1] < 0.0 || !std::isfinite(y[1])) return false;
    }
    return true;
}

double rk4_bstar(const GSpec& g, double a, double c, double b_max, int grid_n,
                 double h, double t_max, double tol) {
    if (grid_n < 2) throw std::invalid_argument("rk4_bstar: grid_n too small");
    double lo = 0.0, hi = -1.0;
    for (int i = 1; i <= grid_n; ++i) {
        const double b = b_max * static_cast<double>(i) / grid_n;
        if (rk4_is_type_one(g, a, c, b, h, t_max)) {
            hi = b;
            break;
        }
        lo = b;
    }
    if (hi < 0.0)
        throw SolverError("rk4_bstar: no Type I slope in the scanned grid");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (rk4_is_type_one(g, a, c, mid, h, t_max) ? hi : lo) = mid;
    }
    return hi;
}

ShootState rk4_m_equation_at(double m, double a, double b, double h,
                             double t_target) {
    auto f = [m](const Vec3& y) -> Vec3 {
        return {y[1], y[2], -(m + 2.0) * y[0] * y[2] + (2.0 * m + 1.0) * y[1] * y[1]};
    };
    return run_to(f, {a, b, -1.0}, h, t_target);
}

}  // namespace fluxbvp::oracle
