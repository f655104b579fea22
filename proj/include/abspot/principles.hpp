#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abspot/energy.hpp"

namespace abspot {

inline constexpr std::size_t kMaxPrincipleMaxPoints = 14;
inline constexpr std::size_t kEquivalenceMaxPoints = 10;

template <class Scalar>
struct MaxPrincipleWitness {
  DiscreteMeasure<Scalar> measure;
  std::size_t exterior_point = 0;
  /// U^mu(y) - V(mu), by direct evaluation; +inf when k(y, j) = inf on the support.
  ExtReal<Scalar> gap;
};

template <class Scalar>
struct MaxPrincipleVerdict {
  bool holds = true;
  std::optional<MaxPrincipleWitness<Scalar>> witness;
};

/// Decides U(mu) = V(mu) for every probability measure mu.
///
/// Supports S are visited by size, then bitmask; exterior points y in
/// increasing order. Supports with an infinite block are skipped (V = inf
/// there). For the rest, max t s.t. sum_j p_j (k(y,j) - k(x,j)) >= t for all
/// x in S is one LP; the principle fails iff t > tolerance. The first
/// violating pair is the witness. Tolerance 0 is used in rational mode.
///
/// Throws BudgetExceeded above kMaxPrincipleMaxPoints points; see
/// max_principle_sample.
template <class Scalar>
MaxPrincipleVerdict<Scalar> max_principle_check(const Kernel<Scalar>& k, double tolerance = kDirectTolerance);

template <class Scalar>
struct MaxPrincipleSample {
  std::size_t samples = 0;
  /// Largest U(mu) - V(mu) seen, with its measure. Never a proof of the
  /// principle, only of its failure.
  std::optional<MaxPrincipleWitness<Scalar>> worst;
};

/// Random measures on random small supports. Non-certifying.
MaxPrincipleSample<double> max_principle_sample(const Kernel<double>& k, std::size_t samples, std::uint64_t seed = 0,
                                                std::size_t max_support = 4);

template <class Scalar>
struct SubsetRow {
  IndexSet subset;
  ExtReal<Scalar> q;
  ExtReal<Scalar> w;
  bool equal = false;
};

template <class Scalar>
struct EquivalenceReport {
  bool mp_holds = false;
  std::optional<MaxPrincipleWitness<Scalar>> mp_witness;
  /// Every nonempty subset, in bitmask order.
  std::vector<SubsetRow<Scalar>> rows;
  /// mp_holds == (every row equal).
  bool consistent = false;
  /// Rows that contradict the verdict: unequal rows when the principle
  /// holds, or none at all when it fails and every row is equal.
  std::vector<IndexSet> offending;
};

/// q(S) and w(S) for every nonempty S, plus the maximum principle verdict.
/// Needs a finite kernel on at most kEquivalenceMaxPoints points.
template <class Scalar>
EquivalenceReport<Scalar> equivalence_experiment(const Kernel<Scalar>& k, double tolerance = kDirectTolerance);

}  // namespace abspot
