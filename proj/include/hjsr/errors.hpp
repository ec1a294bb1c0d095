#pragma once

#include <stdexcept>
#include <string>

namespace hjsr {

// Rejected input: dimension mismatch, invalid weights, malformed documents.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// An iterative computation did not reach its accuracy target inside its
// budget.  Never downgraded to an approximate return value.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

// A set operation would materialize more elements than the configured cap.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hjsr
