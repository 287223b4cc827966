#pragma once

#include <stdexcept>
#include <string>

namespace fluxbvp {

// Failures of the numerical procedures themselves. Malformed inputs throw
// std::invalid_argument instead.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public SolverError {
public:
    using SolverError::SolverError;
};

// No Type I slope found while doubling the upper probe.
class BracketFailure : public SolverError {
public:
    BracketFailure(const std::string& msg, double b_reached, bool all_type_two)
        : SolverError(msg), b_reached(b_reached), all_type_two(all_type_two) {}
    double b_reached;
    bool all_type_two;
};

// The Type I / Type II predicate did not behave monotonically (or produced
// verdicts bisection cannot use); typically override misuse.
class InconsistentPredicate : public SolverError {
public:
    using SolverError::SolverError;
};

class MaxIterations : public SolverError {
public:
    using SolverError::SolverError;
};

class WindowEmpty : public SolverError {
public:
    using SolverError::SolverError;
};

class PlateauNotFound : public SolverError {
public:
    using SolverError::SolverError;
};

class NonMonotoneY : public SolverError {
public:
    using SolverError::SolverError;
};

class TooFewSamples : public SolverError {
public:
    using SolverError::SolverError;
};

}  // namespace fluxbvp
