#pragma once

#include "fluxbvp/model.hpp"

namespace fluxbvp {

// Type I:  f' >= 0 on the whole computed range.
// Type II: f' crosses 0 (then, by the structure of the problem, the solution
//          blows up in finite time).
Classification classify(const Trajectory& traj);

struct ClassifiedRun {
    Classification cls;
    Trajectory traj;
    int escalations = 0;  // automatic t_max doublings used
};

// Integrates at slope b and classifies; an Inconclusive verdict triggers up
// to three automatic retries with t_max doubled.
ClassifiedRun classify_slope(const ProblemSpec& problem, double b);

struct FollowThroughReport {
    bool precondition_ok = false;  // input classified Type II
    bool confirmed_blowup = false;
    std::optional<double> Tb_est;
    int escalations = 0;  // t_max doublings used in reruns
    bool rerun_suggested = false;  // still finite at t_max after escalation
    std::string note;
};

// Confirms that a Type II trajectory actually reaches blow-up: reruns the
// integration past the f'=0 crossing when the input stopped there, doubling
// t_max once if needed.
FollowThroughReport blowup_followthrough(const Trajectory& traj);

}  // namespace fluxbvp
