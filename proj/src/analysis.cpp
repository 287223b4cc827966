#include "fluxbvp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fluxbvp/classify.hpp"
#include "fluxbvp/integrator.hpp"

namespace fluxbvp {

namespace {

using StateFn = std::function<double(const ShootState&)>;

// Composite Simpson with 8 subintervals over [lo, hi] on the dense output.
double simpson8(const Trajectory& traj, const StateFn& w, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    static constexpr double wts[9] = {1, 4, 2, 4, 2, 4, 2, 4, 1};
    const double h = (hi - lo) / 8.0;
    double acc = 0.0;
    for (int i = 0; i <= 8; ++i) acc += wts[i] * w(traj.at(lo + i * h));
    return acc * h / 3.0;
}

// Cumulative integral of w along the trajectory, evaluated at each query
// time; Simpson at 8x the accepted-step density. Queries must be ascending.
std::vector<double> cumulative_integral(const Trajectory& traj, const StateFn& w,
                                        const std::vector<double>& ts) {
    std::vector<double> prefix(traj.steps.size() + 1, 0.0);
    for (std::size_t i = 0; i < traj.steps.size(); ++i)
        prefix[i + 1] = prefix[i] + simpson8(traj, w, traj.steps[i].t0,
                                             traj.samples[i + 1].t);
    std::vector<double> out;
    out.reserve(ts.size());
    std::size_t k = 0;
    for (double t : ts) {
        while (k + 1 < traj.samples.size() && traj.samples[k + 1].t <= t) ++k;
        out.push_back(prefix[k] + simpson8(traj, w, traj.samples[k].t, t));
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i)
        ts[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return ts;
}

double median(std::vector<double> v) {
    if (v.empty()) throw WindowEmpty("median of an empty set");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) throw WindowEmpty("least_squares: fewer than two points");
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw WindowEmpty("least_squares: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        r2 += r * r;
    }
    fit.rms = std::sqrt(r2 / n);
    return fit;
}

// First t with f'(t) <= target; f' is strictly decreasing along concave
// trajectories, so plain bisection on the dense output suffices.
double time_at_fp(const Trajectory& traj, double target) {
    double lo = traj.start_time(), hi = traj.final_time();
    if (traj.at(lo).fp <= target) return lo;
    if (traj.at(hi).fp > target)
        throw WindowEmpty("time_at_fp: f' never reaches the target");
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (traj.at(mid).fp > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Integral identities
// ---------------------------------------------------------------------------

double identity_lhs(const Trajectory& traj, int which, double t) {
    const ShootState s = traj.at(t);
    const double a = traj.problem.a, c = traj.problem.c, b = traj.b;
    switch (which) {
        case 1:
            return s.fpp - c + s.f * s.fp - a * b;
        case 2:
            return s.f * s.fpp - a * c - 0.5 * s.fp * s.fp + 0.5 * b * b +
                   s.f * s.f * s.fp - a * a * b;
        case 3:
            return t * s.fpp - s.fp + b + t * s.f * s.fp - 0.5 * s.f * s.f +
                   0.5 * a * a;
        default:
            throw std::invalid_argument("identity: which must be 1, 2 or 3");
    }
}

double identity_rhs_integrand(const Trajectory& traj, int which, double t) {
    const ShootState s = traj.at(t);
    const GSpec& g = traj.problem.g;
    switch (which) {
        case 1:
            return s.fp * s.fp - g(s.fp);
        case 2:
            return s.f * (2.0 * s.fp * s.fp - g(s.fp));
        case 3:
            return t * (s.fp * s.fp - g(s.fp));
        default:
            throw std::invalid_argument("identity: which must be 1, 2 or 3");
    }
}

double identity_residuals(const Trajectory& traj, int which) {
    if (which < 1 || which > 3)
        throw std::invalid_argument("identity_residuals: which must be 1, 2 or 3");
    const double t_end = traj.final_time();
    const std::vector<double> ts = linspace(traj.start_time(), t_end, 64);
    const GSpec& g = traj.problem.g;

    StateFn integrand;
    if (which == 1)
        integrand = [&g](const ShootState& s) { return s.fp * s.fp - g(s.fp); };
    else if (which == 2)
        integrand = [&g](const ShootState& s) {
            return s.f * (2.0 * s.fp * s.fp - g(s.fp));
        };
    else
        integrand = [&g](const ShootState& s) {
            return s.t * (s.fp * s.fp - g(s.fp));
        };

    const std::vector<double> rhs = cumulative_integral(traj, integrand, ts);
    double max_res = 0.0, max_lhs = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double lhs = identity_lhs(traj, which, ts[i]);
        max_res = std::max(max_res, std::abs(lhs - rhs[i]));
        max_lhs = std::max(max_lhs, std::abs(lhs));
    }
    return max_res / (1.0 + max_lhs);
}

// ---------------------------------------------------------------------------
// Tail fits
// ---------------------------------------------------------------------------

TailFit fit_exponential_tail(const Trajectory& traj) {
    const Classification cls = classify(traj);
    if (!cls.is_type_one() || !cls.bounded_hint)
        throw std::invalid_argument(
            "fit_exponential_tail: requires a Type I trajectory with a plateau");

    const double fp_hi = 1e-3, fp_lo = 1e-6;
    if (traj.samples.back().fp > fp_hi)
        throw WindowEmpty("fit_exponential_tail: f' never decays below 1e-3");
    const double t1 = time_at_fp(traj, fp_hi);
    const double t2 = traj.samples.back().fp <= fp_lo ? time_at_fp(traj, fp_lo)
                                                      : traj.final_time();
    if (!(t2 > t1)) throw WindowEmpty("fit_exponential_tail: empty f' window");

    TailFit fit;
    fit.t_start = t1;
    fit.t_end = t2;
    fit.mu_hat = traj.samples.back().f;

    const std::vector<double> ts = linspace(t1, t2, 512);
    std::vector<double> rates;
    std::vector<double> xs, ys;
    rates.reserve(ts.size());
    for (double t : ts) {
        const ShootState s = traj.at(t);
        if (s.fp > 0.0) rates.push_back(-s.fpp / s.fp);
        const double gap = fit.mu_hat - s.f;
        if (gap > 0.0) {
            xs.push_back(-fit.mu_hat * t);
            ys.push_back(std::log(gap));
        }
    }
    fit.rate_hat = median(rates);
    const LinearFit reg = least_squares(xs, ys);
    fit.A_hat = std::exp(reg.intercept);
    fit.residual_norm = reg.rms;
    return fit;
}

TailFit fit_power_tail(const Trajectory& traj, double beta) {
    (void)beta;  // the fitted slope estimates 1/(1+beta); comparison is the caller's
    const Classification cls = classify(traj);
    if (!cls.is_type_one() || cls.bounded_hint)
        throw std::invalid_argument(
            "fit_power_tail: requires a Type I trajectory without a plateau");

    const double t_end = traj.final_time();
    const double t_lo = t_end / 10.0;
    if (!(t_lo > traj.start_time()))
        throw WindowEmpty("fit_power_tail: trajectory too short for a decade");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < 256; ++i) {
        const double t = t_lo * std::pow(t_end / t_lo, static_cast<double>(i) / 255);
        const double f = traj.at(std::min(t, t_end)).f;
        if (!(f > 0.0)) throw WindowEmpty("fit_power_tail: f not positive in window");
        xs.push_back(std::log(t));
        ys.push_back(std::log(f));
    }
    const LinearFit reg = least_squares(xs, ys);
    TailFit fit;
    fit.t_start = t_lo;
    fit.t_end = t_end;
    fit.rate_hat = reg.slope;
    fit.A_hat = std::exp(reg.intercept);
    fit.residual_norm = reg.rms;
    return fit;
}

// ---------------------------------------------------------------------------
// v-transform
// ---------------------------------------------------------------------------

VProfile v_transform(const Trajectory& traj, std::size_t n_samples, double y_min) {
    if (!(traj.b > 0.0))
        throw std::invalid_argument("v_transform: requires b > 0");
    const Classification cls = classify(traj);
    if (!cls.is_type_one())
        throw std::invalid_argument("v_transform: requires a Type I trajectory");
    if (n_samples < 2)
        throw std::invalid_argument("v_transform: need at least two samples");

    const double b = traj.b;
    const double sqrt_b = std::sqrt(b);
    const double fp_end = traj.samples.back().fp;
    const double y_floor = std::max(y_min, (fp_end / b) * (fp_end / b) * (1.0 + 1e-9));
    if (!(y_floor < 1.0))
        throw WindowEmpty("v_transform: f' has not decayed below its initial value");

    // Strict decrease of f' over the sampled y-range. (Far past the plateau
    // f'' underflows and consecutive stored f' values can tie; those lie
    // below y_floor and are never sampled.)
    const double fp_floor = b * std::sqrt(y_floor);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (traj.samples[i - 1].fp < fp_floor) break;
        if (!(traj.samples[i].fp < traj.samples[i - 1].fp))
            throw NonMonotoneY("v_transform: f' is not strictly decreasing");
    }

    VProfile prof;
    prof.b = b;
    prof.y.reserve(n_samples);
    prof.v.reserve(n_samples);
    prof.vp.reserve(n_samples);

    // t = 0 maps exactly to y = 1.
    const ShootState& s0 = traj.samples.front();
    prof.y.push_back(1.0);
    prof.v.push_back(s0.f / sqrt_b);
    prof.vp.push_back(b * sqrt_b / (2.0 * s0.fpp));

    const double lr = std::log(y_floor);
    for (std::size_t i = 1; i < n_samples; ++i) {
        const double y = std::exp(lr * static_cast<double>(i) / (n_samples - 1));
        const double t = time_at_fp(traj, b * std::sqrt(y));
        const ShootState s = traj.at(t);
        prof.y.push_back(y);
        prof.v.push_back(s.f / sqrt_b);
        prof.vp.push_back(b * sqrt_b / (2.0 * s.fpp));
    }
    return prof;
}

double v_ode_residual(const VProfile& profile, double beta) {
    const std::size_t n = profile.y.size();
    if (n < 16) throw TooFewSamples("v_ode_residual: need at least 16 samples");

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double y = profile.y[i];
        if (y < 1e-4 || y > 1.0) continue;
        // Grid is ordered by decreasing y.
        const double hp = profile.y[i - 1] - profile.y[i];
        const double hm = profile.y[i] - profile.y[i + 1];
        const double vpp = (hm * hm * profile.vp[i - 1] - hp * hp * profile.vp[i + 1] +
                            (hp * hp - hm * hm) * profile.vp[i]) /
                           (hp * hm * (hp + hm));
        const double vp = profile.vp[i];
        const double rhs = profile.v[i] * vp * vp / std::sqrt(y) +
                           2.0 * beta * std::sqrt(y) * vp * vp * vp;
        worst = std::max(worst, std::abs(vpp - rhs) / (1.0 + std::abs(rhs)));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Lemma bound checks
// ---------------------------------------------------------------------------

namespace {

// First zero of f on [0, t_hi]; f is increasing there (f' > 0), so bisection.
std::optional<double> first_f_zero(const Trajectory& traj, double t_hi) {
    if (!(traj.at(0.0).f < 0.0) || !(traj.at(t_hi).f > 0.0)) return std::nullopt;
    double lo = 0.0, hi = t_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (traj.at(mid).f < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<CheckResult> lemma_bound_checks(const Trajectory& traj) {
    std::vector<CheckResult> checks;
    const double a = traj.problem.a, c = traj.problem.c, b = traj.b;
    const Classification cls = classify(traj);

    // (a) f'(s_b) > 3b/4 at the first zero s_b of f (a < 0, large b).
    {
        CheckResult chk{"fp_above_3b4_at_first_f_zero", false, false, ""};
        if (a < 0.0 && b > 0.0) {
            const double t_hi =
                traj.first_downcrossing.value_or(traj.final_time());
            if (const auto s_b = first_f_zero(traj, std::min(t_hi, traj.final_time()))) {
                const double fp_sb = traj.at(*s_b).fp;
                chk.applicable = true;
                chk.passed = fp_sb > 0.75 * b;
                chk.details = "s_b = " + std::to_string(*s_b) +
                              ", f'(s_b) = " + std::to_string(fp_sb) +
                              ", 3b/4 = " + std::to_string(0.75 * b);
            } else {
                chk.details = "f does not reach 0 while f' > 0";
            }
        } else {
            chk.details = "requires a < 0 and b > 0";
        }
        checks.push_back(chk);
    }

    // (b) t_b >= (c + sqrt(c^2 + b^3)) / b^2 at the first time f' = b/2.
    {
        CheckResult chk{"half_slope_time_lower_bound", false, false, ""};
        if (b > 0.0 && traj.samples.back().fp <= 0.5 * b) {
            const double t_b = time_at_fp(traj, 0.5 * b);
            if (traj.at(t_b).f >= 0.0) {
                const double bound = (c + std::sqrt(c * c + b * b * b)) / (b * b);
                chk.applicable = true;
                chk.passed = t_b >= bound;
                chk.details = "t_b = " + std::to_string(t_b) +
                              ", bound = " + std::to_string(bound);
            } else {
                chk.details = "f(t_b) < 0";
            }
        } else {
            chk.details = "f' never reaches b/2 (or b <= 0)";
        }
        checks.push_back(chk);
    }

    // (c) f(t0)^2 <= 2b + a^2 at the f'-zero time of a Type II trajectory.
    {
        CheckResult chk{"f_squared_bound_at_crossing", false, false, ""};
        if (cls.is_type_two() && traj.first_downcrossing &&
            *traj.first_downcrossing <= traj.final_time()) {
            const double f_t0 = traj.at(*traj.first_downcrossing).f;
            const double bound = 2.0 * b + a * a;
            chk.applicable = true;
            chk.passed = f_t0 * f_t0 <= bound + 1e-2;
            chk.details = "f(t0)^2 = " + std::to_string(f_t0 * f_t0) +
                          ", 2b + a^2 = " + std::to_string(bound);
        } else {
            chk.details = "requires a Type II trajectory with a localized crossing";
        }
        checks.push_back(chk);
    }

    return checks;
}

// ---------------------------------------------------------------------------
// m <-> beta correspondence
// ---------------------------------------------------------------------------

double map_m_to_beta(double m) {
    if (!(m > -1.0 && m < -0.5))
        throw OutOfRange("map_m_to_beta: m must lie in (-1, -1/2)");
    return -(2.0 * m + 1.0) / (m + 2.0);
}

double m_form_residual(const Trajectory& traj_beta, double m) {
    const double k = std::sqrt(m + 2.0);
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("m_form_residual: m + 2 must be positive");
    if (traj_beta.steps.empty())
        throw TooFewSamples("m_form_residual: trajectory has no steps");

    const double s_end = traj_beta.final_time() / k;
    double worst = 0.0;
    for (double s : linspace(traj_beta.start_time() / k, s_end, 64)) {
        const double t = std::min(k * s, traj_beta.final_time());
        const ShootState u = traj_beta.at(t);
        const double f = u.f / k;
        const double fp = u.fp;
        const double fpp = k * u.fpp;
        const double fppp = k * k * traj_beta.third_derivative_at(t);
        const double res = fppp + (m + 2.0) * f * fpp - (2.0 * m + 1.0) * fp * fp;
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

double beta_ode_residual(const Trajectory& traj) {
    if (traj.steps.empty())
        throw TooFewSamples("beta_ode_residual: trajectory has no steps");
    const GSpec& g = traj.problem.g;
    double worst = 0.0;
    for (double t : linspace(traj.start_time(), traj.final_time(), 64)) {
        const ShootState s = traj.at(t);
        const double res = traj.third_derivative_at(t) + s.f * s.fpp + g(s.fp);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace fluxbvp
