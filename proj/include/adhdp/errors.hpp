#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adhdp {

// Non-finite scalar handed to a pure function.
class InvalidInputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Dimension mismatch or other broken precondition on shapes.
class ContractError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// A learning-rate bound was requested with gammas that break the stability
// ordering constraints (gamma2 > alpha, gamma3 > gamma1).
class ConstraintViolationError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised by the learner when an error or weight stops being finite or leaves
// the divergence envelope. `iteration` counts inner iterations within the step.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what + " (inner iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

private:
  std::size_t iteration_;
};

}  // namespace adhdp
