#pragma once

#include <stdexcept>
#include <string>

namespace abspot {

/// Malformed input: bad kernel matrix, bad measure, bad spec file.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Measure/kernel/subset living on different spaces.
class SpaceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exhaustive enumeration would exceed the configured candidate budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A proven invariant did not hold on computed values.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Output file could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace abspot
