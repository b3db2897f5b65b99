#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpt {

// Error taxonomy shared by every module. The CLI maps these onto exit codes:
// InputError (and CrossPhaseError, DomainError) -> 2, ResourceError -> 3,
// NumericError -> 4.

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parameter pair straddles a critical point; the scaling ratio is undefined.
struct CrossPhaseError : InputError {
    using InputError::InputError;
};

/// Valid input that falls outside the range where a formula applies.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-convergence of a nonlinear fit; carries the cost after every iteration.
struct FitError : NumericError {
    FitError(const std::string& what, std::vector<double> trace)
        : NumericError(what), residual_trace(std::move(trace)) {}
    std::vector<double> residual_trace;
};

}  // namespace qpt
