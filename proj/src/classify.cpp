#include "fluxbvp/classify.hpp"

#include <algorithm>
#include <cmath>

#include "fluxbvp/integrator.hpp"

namespace fluxbvp {

namespace {

// Relative change of f over the last decade of time below 1e-3.
bool has_plateau(const Trajectory& traj) {
    const double t_end = traj.final_time();
    if (!(t_end > 0.0)) return false;
    const double f_end = traj.samples.back().f;
    const double f_ref = traj.at(t_end / 10.0).f;
    return std::abs(f_end - f_ref) <= 1e-3 * std::max(1e-12, std::abs(f_end));
}

}  // namespace

Classification classify(const Trajectory& traj) {
    Classification cls;
    const ShootState& last = traj.samples.back();

    switch (traj.termination.kind) {
        case TerminationKind::ZeroCrossing:
            cls.kind = Classification::Kind::TypeII;
            cls.t0 = traj.termination.value;
            return cls;

        case TerminationKind::BlowUp:
            if (last.fp < 0.0) {
                cls.kind = Classification::Kind::TypeII;
                cls.t0 = traj.first_downcrossing.value_or(0.0);
                cls.Tb_est = traj.termination.value;
                return cls;
            }
            cls.kind = Classification::Kind::Inconclusive;
            cls.reason = "blow-up threshold reached with f' still nonnegative";
            return cls;

        case TerminationKind::ReachedTmax: {
            const bool all_positive =
                std::all_of(traj.samples.begin(), traj.samples.end(),
                            [](const ShootState& s) { return s.fp > 0.0; });
            if (all_positive && !traj.first_downcrossing && !traj.step_underflow) {
                cls.kind = Classification::Kind::TypeI;
                cls.bounded_hint =
                    last.fp < traj.problem.controls.zero_eps && has_plateau(traj);
                return cls;
            }
            cls.kind = Classification::Kind::Inconclusive;
            cls.reason = traj.step_underflow
                             ? "step underflow before any termination condition"
                             : "f' crossed zero but no blow-up by t_max";
            return cls;
        }
    }
    cls.kind = Classification::Kind::Inconclusive;
    cls.reason = "unknown termination";
    return cls;
}

ClassifiedRun classify_slope(const ProblemSpec& problem, double b) {
    ProblemSpec p = problem;
    ClassifiedRun run;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        run.traj = integrate(p, b);
        run.cls = classify(run.traj);
        run.escalations = attempt;
        if (run.cls.kind != Classification::Kind::Inconclusive) break;
        p.controls.t_max *= 2.0;  // near-critical slopes have slow transients
    }
    return run;
}

FollowThroughReport blowup_followthrough(const Trajectory& traj) {
    FollowThroughReport report;
    const Classification cls = classify(traj);
    if (!cls.is_type_two()) {
        report.precondition_ok = false;
        report.note = "input trajectory is not Type II";
        return report;
    }
    report.precondition_ok = true;

    if (traj.termination.kind == TerminationKind::BlowUp) {
        report.confirmed_blowup = true;
        report.Tb_est = traj.termination.value;
        return report;
    }

    // Stopped at the crossing (or ran out of horizon): chase the blow-up.
    // Near-critical slopes creep for a long time after the crossing before
    // f turns negative, so the rerun gets its own, longer horizon.
    ProblemSpec p = traj.problem;
    p.controls.stop_at_first_downcrossing = false;
    p.controls.t_max = std::max(1000.0, p.controls.t_max);
    for (int attempt = 0; attempt <= 1; ++attempt) {
        report.escalations = attempt;
        const Trajectory cont = integrate(p, traj.b);
        if (cont.termination.kind == TerminationKind::BlowUp) {
            report.confirmed_blowup = true;
            report.Tb_est = cont.termination.value;
            return report;
        }
        p.controls.t_max *= 2.0;
    }
    report.rerun_suggested = true;
    report.note = "still finite at t_max; rerun with a larger horizon";
    return report;
}

}  // namespace fluxbvp
