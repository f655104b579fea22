#pragma once

#include <span>
#include <vector>

#include "abspot/space_kernel.hpp"

namespace abspot {

// Floating-mode weights below this are dropped and the rest renormalized.
inline constexpr double kWeightDust = 1e-12;

/// Probability vector over a finite space, stored dense. The support is
/// derived from the strictly positive weights.
template <class Scalar>
class DiscreteMeasure {
 public:
  /// Exact mode: weights must sum to exactly 1. Floating mode: within
  /// `tolerance`, after which dust is truncated and the vector renormalized.
  explicit DiscreteMeasure(std::vector<Scalar> weights, double tolerance = kDirectTolerance);

  static DiscreteMeasure dirac(std::size_t n, std::size_t at);
  static DiscreteMeasure uniform(std::size_t n);
  static DiscreteMeasure uniform_on(std::size_t n, std::span<const std::size_t> support);

  std::size_t size() const { return weights_.size(); }
  const std::vector<Scalar>& weights() const { return weights_; }
  const Scalar& operator[](std::size_t i) const { return weights_[i]; }
  const IndexSet& support() const { return support_; }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) { return a.weights_ == b.weights_; }

 private:
  std::vector<Scalar> weights_;
  IndexSet support_;
};

template <class Scalar>
using PotentialVector = std::vector<ExtReal<Scalar>>;

enum class Over { all_points, support_only };

/// U^mu(x) = sum_{j in supp mu} mu_j k(x, j), with 0 * inf = 0.
template <class Scalar>
PotentialVector<Scalar> potential(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu);

/// W(mu) = sum_{i,j in supp mu} mu_i mu_j k(i, j).
template <class Scalar>
ExtReal<Scalar> energy(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu);

/// U(mu) (all points) or V(mu) (support only).
template <class Scalar>
ExtReal<Scalar> sup_potential(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu, Over over);

/// Max of a potential over the given indices.
template <class Scalar>
ExtReal<Scalar> max_over(const PotentialVector<Scalar>& u, std::span<const std::size_t> indices);

/// Measure on the parent space from weights on `subset` (subset[i] gets w[i]).
template <class Scalar>
DiscreteMeasure<Scalar> lift_measure(std::size_t n, std::span<const std::size_t> subset, std::span<const Scalar> w,
                                     double tolerance = kDirectTolerance);

}  // namespace abspot
