#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fluxbvp/model.hpp"

namespace fluxbvp::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Options {
    SolverControls base;     // tolerances shared by all criteria
    std::vector<int> only;   // empty = run everything
};

std::vector<std::string> criteria_names();

// Runs the acceptance checks, printing one [PASS]/[FAIL] line per criterion.
std::vector<CriterionResult> run_all(const Options& opts, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace fluxbvp::verify
