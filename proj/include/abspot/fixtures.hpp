#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "abspot/space_kernel.hpp"

namespace abspot {

/// |value - target| <= tolerance.
struct Approx {
  double target = 0.0;
  double tolerance = 0.0;
};

/// Stated in words only; checked by dedicated tests.
struct Qualitative {
  std::string claim;
};

struct Expectation {
  std::string quantity;
  std::variant<ExactReal, bool, Approx, Qualitative> value;
  std::string note;
};

struct Fixture {
  std::string name;
  std::string description;
  KernelSpec spec;
  std::vector<Expectation> expected;

  const Expectation* find(const std::string& quantity) const;
};

/// Truncation size N for the countable examples, grid size m for the
/// interval ones. Missing values take the defaults below.
struct FixtureParams {
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
};

inline constexpr std::size_t kDefaultTruncation = 6;
inline constexpr std::size_t kDefaultGeometricTruncation = 12;
inline constexpr std::size_t kDefaultLogGrid = 65;
inline constexpr std::size_t kDefaultModifiedLogGrid = 24;

std::vector<std::string> fixture_names();

/// Throws ValidationError for an unknown name or out-of-range parameter.
Fixture fixture(const std::string& name, const FixtureParams& params = {});

}  // namespace abspot
