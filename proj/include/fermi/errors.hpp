#ifndef FERMI_ERRORS_HPP
#define FERMI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fermi {

// Solver-level failures (CLI maps these to exit code 3).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : SolverError {
    using SolverError::SolverError;
};

struct VelocityTooLow : SolverError {
    using SolverError::SolverError;
};

struct AmbiguousPreimage : SolverError {
    using SolverError::SolverError;
};

struct PreconditionFailed : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotHyperbolic : std::domain_error {
    using std::domain_error::domain_error;
};

struct DivergenceDetected : SolverError {
    using SolverError::SolverError;
};

struct TailTruncationTooCoarse : SolverError {
    using SolverError::SolverError;
};

} // namespace fermi

#endif
