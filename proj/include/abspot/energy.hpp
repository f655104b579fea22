#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "abspot/measure.hpp"

namespace abspot {

/// Largest subset for which v visits every support.
inline constexpr std::size_t kSupportEnumerationMaxPoints = 16;

enum class Certification { exact_rational, float_certified, heuristic_upper_bound, heuristic_lower_bound };

const char* to_string(Certification c);

template <class Scalar>
struct EquilibriumResult {
  ExtReal<Scalar> w_value;
  /// Absent iff w = +inf.
  std::optional<DiscreteMeasure<Scalar>> minimizer;
  Certification certification = Certification::exact_rational;
};

struct EnergyOptions {
  /// Face enumeration (certified) up to this many points.
  std::size_t enumeration_threshold = 14;
  double tolerance = kDirectTolerance;
  // Heuristic descent beyond the threshold.
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 5000;
};

/// w(subset) = min of W(mu) over probability vectors on `subset`.
///
/// Up to the threshold every face S with a finite kernel block is visited;
/// the stationarity system [K_S -1; 1^T 0][p; c] = [0; 1] is solved and
/// nonnegative solutions are candidates with energy c. Faces whose system is
/// singular are skipped: all stationary points of a face share one value c,
/// and moving along the solution set reaches a sub-face that carries the
/// same value, so the minimum is still found. The minimum is global because
/// any face minimizer is stationary on the face it lies in.
///
/// Beyond the threshold: full-support stationary solve plus projected
/// gradient descent, labelled heuristic-upper-bound.
template <class Scalar>
EquilibriumResult<Scalar> wiener_energy(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                                        const EnergyOptions& options = {});

template <class Scalar>
struct MinimaxValue {
  ExtReal<Scalar> value;
  std::optional<DiscreteMeasure<Scalar>> witness;
};

template <class Scalar>
struct MinimaxEnergies {
  MinimaxValue<Scalar> u;
  MinimaxValue<Scalar> v;
  MinimaxValue<Scalar> q;
};

/// q = inf over mu on subset of max_{x in subset} U^mu(x) (one LP).
template <class Scalar>
MinimaxValue<Scalar> minimax_q(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                               double tolerance = kDirectTolerance);

/// u = inf over mu on subset of max over the whole space (one LP).
template <class Scalar>
MinimaxValue<Scalar> minimax_u(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                               double tolerance = kDirectTolerance);

/// v = inf over mu on subset of max over supp mu (one LP per support).
template <class Scalar>
MinimaxValue<Scalar> minimax_v(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                               double tolerance = kDirectTolerance);

template <class Scalar>
MinimaxEnergies<Scalar> minimax_energies(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                                         double tolerance = kDirectTolerance);

struct FrostmanReport {
  bool lower_ok = true;
  IndexSet lower_violations;
  bool support_upper_ok = true;
  IndexSet support_upper_violations;
  bool ae_equality_ok = true;
  IndexSet ae_equality_violations;
  /// Points of infinite self-energy, excused from the lower bound.
  IndexSet exceptional_points;

  bool all_ok() const { return lower_ok && support_upper_ok && ae_equality_ok; }
};

/// (i) U^mu >= w off the exceptional points, (ii) U^mu <= w on supp mu,
/// (iii) U^mu = w at every atom.
template <class Scalar>
FrostmanReport frostman_verify(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                               const DiscreteMeasure<Scalar>& mu, const ExtReal<Scalar>& w_value,
                               double tolerance = kDirectTolerance);

template <class Scalar>
struct RendezvousResult {
  ExtReal<Scalar> r_value;
  std::optional<DiscreteMeasure<Scalar>> invariant_measure;
  /// max - min of the invariant measure's potential over the subset.
  std::optional<Scalar> constancy_defect;
};

/// r = q for finite-valued kernels, plus a measure with constant potential
/// when one exists (largest support among all such measures).
template <class Scalar>
RendezvousResult<Scalar> rendezvous(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                                    double tolerance = kDirectTolerance);

}  // namespace abspot
