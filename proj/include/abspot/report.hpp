#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "abspot/chebyshev.hpp"
#include "abspot/principles.hpp"

namespace abspot {

/// Exact values serialize as {"num":..,"den":..,"float":..} (num/den are
/// strings when they do not fit in 64 bits), doubles as numbers, +inf as "inf".
nlohmann::json value_json(const Rational& x);
nlohmann::json value_json(double x);
template <class Scalar>
nlohmann::json value_json(const ExtReal<Scalar>& x) {
  if (x.is_infinite()) return "inf";
  return value_json(x.value());
}

template <class Scalar>
nlohmann::json measure_json(const DiscreteMeasure<Scalar>& mu, const FiniteSpace& space);

/// Point multiset as parent indices plus labels.
nlohmann::json points_json(const std::vector<std::size_t>& points, const FiniteSpace& space);

struct QuantityReport {
  std::string quantity;
  nlohmann::json value;
  std::string certification;
  std::optional<nlohmann::json> witness;
  /// Further named fields (subset, n, traces, ...).
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Upper-bound labels are reserved for minimization quantities (D_n, w) and
/// lower-bound labels for maximization limits (M_n, running sups).
/// Throws InvariantViolation otherwise.
void check_certification(const std::string& quantity, const std::string& certification);

template <class Scalar>
std::string certification_of(BoundStatus status);

/// Columns n,D_n,D_status,M_n,M_status preceded by "# w=" and "# q=" lines.
/// Values print as exact rationals ("p/q") in exact mode.
template <class Scalar>
std::string convergence_csv(const DiameterTrace<Scalar>& d, const ChebyshevTrace<Scalar>& m,
                            const ExtReal<Scalar>& w, const std::optional<ExtReal<Scalar>>& q);

template <class Scalar>
nlohmann::json equivalence_json(const EquivalenceReport<Scalar>& report, const FiniteSpace& space);

/// subset,q,w,equal
template <class Scalar>
std::string equivalence_csv(const EquivalenceReport<Scalar>& report);

/// Compact text form: "inf", "p/q" for exact values, %.17g for doubles.
template <class Scalar>
std::string format_value(const ExtReal<Scalar>& x);

}  // namespace abspot
