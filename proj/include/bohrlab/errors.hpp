#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bohrlab {

// Arguments from a mismatched family/space, or structurally unusable input.
struct InvalidInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested window/grid is too coarse to answer the question asked.
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured size limits.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solver failed to converge within its budget.
struct NumericError : std::runtime_error {
    std::vector<double> residual_history;
    explicit NumericError(const std::string& what, std::vector<double> history = {})
        : std::runtime_error(what), residual_history(std::move(history)) {}
};

// Experiment configuration could not be parsed or validated.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bohrlab
