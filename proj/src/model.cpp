#include "fluxbvp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fluxbvp {

// ---------------------------------------------------------------------------
// GSpec
// ---------------------------------------------------------------------------

GSpec GSpec::quadratic(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("GSpec::quadratic: beta must be positive and finite");
    GSpec g;
    g.kind_ = GKind::Quadratic;
    g.beta_ = beta;
    return g;
}

GSpec GSpec::oracle_cubic() {
    GSpec g;
    g.kind_ = GKind::OracleCubic;
    return g;
}

GSpec GSpec::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty())
        throw std::invalid_argument("GSpec::polynomial: empty coefficient list");
    if (coeffs.front() != 0.0)
        throw std::invalid_argument("GSpec::polynomial: constant term must be 0 so that g(0)=0");
    for (double ck : coeffs)
        if (!std::isfinite(ck))
            throw std::invalid_argument("GSpec::polynomial: non-finite coefficient");
    GSpec g;
    g.kind_ = GKind::Polynomial;
    g.coeffs_ = std::move(coeffs);
    return g;
}

GSpec GSpec::with_delta_margin(double delta) const {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("GSpec::with_delta_margin: delta must lie in (0,1)");
    GSpec g = *this;
    g.delta_ = delta;
    return g;
}

double GSpec::operator()(double x) const {
    switch (kind_) {
        case GKind::Quadratic:
            return beta_ * (x * x);
        case GKind::OracleCubic:
            return (x * x) * (1.0 - 12.0 * (x * x * x));
        case GKind::Polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
                acc = acc * x + *it;
            return acc;
        }
    }
    return 0.0;
}

std::string GSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case GKind::Quadratic: os << "quadratic(beta=" << beta_ << ")"; break;
        case GKind::OracleCubic: os << "oracle-cubic"; break;
        case GKind::Polynomial: {
            os << "poly(";
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                os << (i ? "," : "") << coeffs_[i];
            os << ")";
            break;
        }
    }
    return os.str();
}

double g_eval(const GSpec& g, double x) { return g(x); }

SubquadraticReport check_subquadratic(const GSpec& g, std::span<const double> grid) {
    if (grid.empty())
        throw std::invalid_argument("check_subquadratic: empty grid");
    SubquadraticReport report;
    for (double x : grid) {
        if (x == 0.0) continue;  // g(0)=0 by continuity, not a violation
        ++report.points_checked;
        const double gx = g(x);
        const double x2 = x * x;
        if (!(gx > 0.0))
            report.violations.push_back({SubquadraticViolation::Kind::NotPositive, x, gx});
        if (gx > x2)
            report.violations.push_back({SubquadraticViolation::Kind::ExceedsSquare, x, gx});
        if (g.delta_margin() && gx > (1.0 - *g.delta_margin()) * x2)
            report.violations.push_back({SubquadraticViolation::Kind::ExceedsMargin, x, gx});
    }
    return report;
}

std::vector<double> default_subquadratic_grid() {
    constexpr int n = 512;
    std::vector<double> grid;
    grid.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
        const double x = 1e-6 * std::pow(10.0, 9.0 * i / (n - 1));
        grid.push_back(x);
        grid.push_back(-x);
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Controls and problem validation
// ---------------------------------------------------------------------------

void SolverControls::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("SolverControls: ") + name +
                                        " must be positive and finite");
    };
    positive(abs_tol, "abs_tol");
    positive(rel_tol, "rel_tol");
    positive(t_max, "t_max");
    positive(zero_eps, "zero_eps");
    positive(event_tol, "event_tol");
    positive(bisect_tol, "bisect_tol");
    if (!(blowup_threshold >= 1e6))
        throw std::invalid_argument("SolverControls: blowup_threshold must be >= 1e6");
    if (max_bisect_iters <= 0)
        throw std::invalid_argument("SolverControls: max_bisect_iters must be positive");
}

void ProblemSpec::validate() const {
    if (!std::isfinite(a))
        throw std::invalid_argument("ProblemSpec: a must be finite");
    if (!(c < 0.0) || !std::isfinite(c))
        throw std::invalid_argument("ProblemSpec: c must be strictly negative");
    controls.validate();
}

// ---------------------------------------------------------------------------
// Dense steps and trajectories
// ---------------------------------------------------------------------------

double DenseStep::eval(int comp, double t) const {
    const double theta = (t - t0) / h;
    const double om = 1.0 - theta;
    const auto& r = rc[static_cast<std::size_t>(comp)];
    return r[0] + theta * (r[1] + om * (r[2] + theta * (r[3] + om * r[4])));
}

double DenseStep::eval_deriv(int comp, double t) const {
    const double theta = (t - t0) / h;
    const auto& r = rc[static_cast<std::size_t>(comp)];
    // d/dtheta of r0 + theta r1 + theta(1-theta) r2 + theta^2(1-theta) r3
    //            + theta^2 (1-theta)^2 r4
    const double d = r[1] + (1.0 - 2.0 * theta) * r[2] +
                     theta * (2.0 - 3.0 * theta) * r[3] +
                     2.0 * theta * (1.0 - theta) * (1.0 - 2.0 * theta) * r[4];
    return d / h;
}

std::size_t Trajectory::step_index(double t) const {
    // Largest step whose start is <= t.
    std::size_t lo = 0, hi = steps.size();
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (steps[mid].t0 <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

ShootState Trajectory::at(double t) const {
    if (samples.empty())
        throw OutOfRange("Trajectory::at: empty trajectory");
    if (t < start_time() || t > final_time())
        throw OutOfRange("Trajectory::at: t outside the computed range");
    if (steps.empty()) return samples.front();
    const std::size_t i = step_index(t);
    if (t == samples[i].t) return samples[i];
    if (t == samples[i + 1].t) return samples[i + 1];
    const DenseStep& s = steps[i];
    return {t, s.eval(0, t), s.eval(1, t), s.eval(2, t)};
}

double Trajectory::third_derivative_at(double t) const {
    if (steps.empty())
        throw TooFewSamples("Trajectory::third_derivative_at: no steps");
    if (t < start_time() || t > final_time())
        throw OutOfRange("Trajectory::third_derivative_at: t outside the computed range");
    return steps[step_index(t)].eval_deriv(2, t);
}

namespace {

// rcont coefficients of the cubic Hermite interpolant (r4 = 0).
std::array<double, 5> hermite_rc(double y0, double y1, double s0, double s1, double h) {
    const double dy = y1 - y0;
    const double bspl = h * s0 - dy;
    return {y0, dy, bspl, dy - h * s1 - bspl, 0.0};
}

}  // namespace

Trajectory Trajectory::from_samples(ProblemSpec problem, double b,
                                    std::vector<ShootState> samples,
                                    Termination termination) {
    if (samples.empty())
        throw std::invalid_argument("Trajectory::from_samples: no samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw std::invalid_argument("Trajectory::from_samples: t must be strictly increasing");

    const std::size_t n = samples.size();
    // Node slopes for f'' by nonuniform finite differences (f and f' carry
    // their own derivatives in the state).
    std::vector<double> fppp(n, 0.0);
    if (n >= 2) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) {
                fppp[i] = (samples[1].fpp - samples[0].fpp) / (samples[1].t - samples[0].t);
            } else if (i + 1 == n) {
                fppp[i] = (samples[n - 1].fpp - samples[n - 2].fpp) /
                          (samples[n - 1].t - samples[n - 2].t);
            } else {
                const double hm = samples[i].t - samples[i - 1].t;
                const double hp = samples[i + 1].t - samples[i].t;
                fppp[i] = (hm * hm * samples[i + 1].fpp - hp * hp * samples[i - 1].fpp +
                           (hp * hp - hm * hm) * samples[i].fpp) /
                          (hm * hp * (hm + hp));
            }
        }
    }

    Trajectory traj;
    traj.problem = std::move(problem);
    traj.b = b;
    traj.termination = termination;
    traj.steps.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const ShootState& u = samples[i];
        const ShootState& w = samples[i + 1];
        DenseStep step;
        step.t0 = u.t;
        step.h = w.t - u.t;
        step.t_end = w.t;
        step.rc[0] = hermite_rc(u.f, w.f, u.fp, w.fp, step.h);
        step.rc[1] = hermite_rc(u.fp, w.fp, u.fpp, w.fpp, step.h);
        step.rc[2] = hermite_rc(u.fpp, w.fpp, fppp[i], fppp[i + 1], step.h);
        traj.steps.push_back(step);
    }
    traj.samples = std::move(samples);
    if (traj.samples.front().fp <= 0.0) traj.first_downcrossing = traj.samples.front().t;
    return traj;
}

}  // namespace fluxbvp
