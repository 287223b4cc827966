#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fluxbvp/errors.hpp"

namespace fluxbvp {

// ---------------------------------------------------------------------------
// Nonlinearity g in  f''' + f f'' + g(f') = 0.
// ---------------------------------------------------------------------------

enum class GKind { Quadratic, OracleCubic, Polynomial };

class GSpec {
public:
    static GSpec quadratic(double beta);
    // g(x) = x^2 (1 - 12 x^3); the problem (a,b,c)=(1,-1/2,-1/4) then has the
    // closed-form solution f(t) = sqrt(1-t), used as an exact oracle.
    static GSpec oracle_cubic();
    // coeffs[k] multiplies x^k; coeffs[0] must be 0 so that g(0)=0.
    static GSpec polynomial(std::vector<double> coeffs);

    GSpec with_delta_margin(double delta) const;

    GKind kind() const { return kind_; }
    double beta() const { return beta_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    std::optional<double> delta_margin() const { return delta_; }

    double operator()(double x) const;

    std::string describe() const;

private:
    GSpec() = default;
    GKind kind_ = GKind::Quadratic;
    double beta_ = 0.0;
    std::vector<double> coeffs_;
    std::optional<double> delta_;
};

double g_eval(const GSpec& g, double x);

struct SubquadraticViolation {
    enum class Kind { NotPositive, ExceedsSquare, ExceedsMargin };
    Kind kind;
    double x;
    double gx;
};

struct SubquadraticReport {
    std::vector<SubquadraticViolation> violations;
    std::size_t points_checked = 0;
    bool ok() const { return violations.empty(); }
};

// Checks 0 < g(x) <= x^2 on the grid (x = 0 entries are skipped), and
// g(x) <= (1-delta) x^2 when the margin is set. Report-only.
SubquadraticReport check_subquadratic(const GSpec& g, std::span<const double> grid);

// 512 logarithmically spaced magnitudes in [1e-6, 1e3], both signs.
std::vector<double> default_subquadratic_grid();

// ---------------------------------------------------------------------------
// Problem data and solver controls.
// ---------------------------------------------------------------------------

struct SolverControls {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double t_max = 200.0;
    double blowup_threshold = 1e8;
    double zero_eps = 1e-6;   // f' below this counts as "reached 0" for hints
    double event_tol = 1e-12; // width, in t, of the f'=0 localization
    double bisect_tol = 1e-10;
    int max_bisect_iters = 200;
    // When false, a localized f'=0 downcrossing is recorded but integration
    // continues (used to chase Type II trajectories into blow-up).
    bool stop_at_first_downcrossing = true;
    // Shooting normally refuses g other than beta*x^2 with beta in (0,1).
    bool shoot_override = false;

    void validate() const;  // throws std::invalid_argument
};

struct ProblemSpec {
    double a = 0.0;  // f(0)
    double c = -1.0; // f''(0), strictly negative
    GSpec g = GSpec::quadratic(0.5);
    SolverControls controls;

    void validate() const;  // throws std::invalid_argument
};

struct ShootState {
    double t = 0.0;
    double f = 0.0;
    double fp = 0.0;  // f'
    double fpp = 0.0; // f''
};

// ---------------------------------------------------------------------------
// Trajectories with per-step dense output.
// ---------------------------------------------------------------------------

enum class TerminationKind { ReachedTmax, ZeroCrossing, BlowUp };

struct Termination {
    TerminationKind kind = TerminationKind::ReachedTmax;
    // ReachedTmax: the final time; ZeroCrossing: t0; BlowUp: lower estimate
    // of the blow-up time T_b (last accepted t).
    double value = 0.0;
};

// One accepted step's interpolation polynomial, stored per component in the
// rcont form of Hairer's DOPRI5:
//   u(theta) = r0 + theta*(r1 + (1-theta)*(r2 + theta*(r3 + (1-theta)*r4)))
// with theta = (t - t0)/h. Cubic Hermite data fits the same form with r4 = 0.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;      // polynomial scale (full step before any truncation)
    double t_end = 0.0;  // validity limit (== t0+h unless event-truncated)
    std::array<std::array<double, 5>, 3> rc{};

    double eval(int comp, double t) const;
    double eval_deriv(int comp, double t) const;  // d/dt of the interpolant
};

class Trajectory {
public:
    ProblemSpec problem;
    double b = 0.0;  // shooting slope f'(0)
    std::vector<ShootState> samples;
    std::vector<DenseStep> steps;  // steps.size() == samples.size()-1
    Termination termination;
    // First localized time with f' crossing 0 from above (0 when f'(0) <= 0).
    std::optional<double> first_downcrossing;
    bool step_underflow = false;

    double start_time() const { return samples.front().t; }
    double final_time() const { return samples.back().t; }

    // Dense-output evaluation; exact at stored nodes. Throws OutOfRange for
    // t outside [start_time, final_time].
    ShootState at(double t) const;
    // d^3f/dt^3 from the derivative of the f'' interpolant (independent of
    // the right-hand side). Throws TooFewSamples when there are no steps.
    double third_derivative_at(double t) const;

    // Wraps externally produced samples (synthetic data, re-read CSV) with
    // cubic Hermite interpolation so the analysis operations apply uniformly.
    // Requires strictly increasing t; does not require t to start at 0.
    static Trajectory from_samples(ProblemSpec problem, double b,
                                   std::vector<ShootState> samples,
                                   Termination termination);

private:
    std::size_t step_index(double t) const;
};

// ---------------------------------------------------------------------------
// Classification and shooting results.
// ---------------------------------------------------------------------------

struct Classification {
    enum class Kind { TypeI, TypeII, Inconclusive };
    Kind kind = Kind::Inconclusive;
    // Type I: plateau reached (f' below zero_eps and f flat over the last
    // decade of time) -> likely the bounded solution.
    bool bounded_hint = false;
    // Type II: first f' downcrossing time.
    double t0 = 0.0;
    // Type II: blow-up time estimate when the run ended in BlowUp.
    std::optional<double> Tb_est;
    std::string reason;  // Inconclusive only

    bool is_type_one() const { return kind == Kind::TypeI; }
    bool is_type_two() const { return kind == Kind::TypeII; }
};

struct CheckResult {
    std::string name;
    bool applicable = true;
    bool passed = false;
    std::string details;
};

struct BStarResult {
    double b_star = 0.0;
    double b_lo = 0.0;
    double b_hi = 0.0;
    double mu = 0.0;  // plateau of f on the b_hi trajectory
    int iterations = 0;
    std::vector<CheckResult> diagnostics;
};

}  // namespace fluxbvp
