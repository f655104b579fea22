#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "abspot/space_kernel.hpp"

namespace abspot {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 2'000'000;

enum class BoundStatus { exact, heuristic_upper_bound, heuristic_lower_bound };

const char* to_string(BoundStatus s);

/// Number of size-n multisets drawn from `points` items, saturating at
/// UINT64_MAX.
std::uint64_t multiset_count(std::size_t points, std::size_t n);

/// n points (repetition allowed, sorted parent indices) and their average
/// pairwise kernel value (1/(n(n-1))) sum_{j != l} k(w_j, w_l).
template <class Scalar>
struct FeketeSystem {
  std::vector<std::size_t> indices;
  ExtReal<Scalar> value;
  BoundStatus status = BoundStatus::exact;
};

template <class Scalar>
ExtReal<Scalar> average_pair_value(const Kernel<Scalar>& k, std::span<const std::size_t> points);

/// D_n over `subset` by exhaustive multiset enumeration with pruning.
/// Ties resolve to the lexicographically smallest multiset.
/// Throws BudgetExceeded when C(|subset|+n-1, n) > budget.
template <class Scalar>
FeketeSystem<Scalar> dn_exact(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n,
                              std::uint64_t budget = kDefaultEnumerationBudget);

/// Single-point exchange from a greedy start plus `restarts` random starts.
/// The value is an upper bound on D_n.
template <class Scalar>
FeketeSystem<Scalar> fekete_heuristic(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n,
                                      std::size_t restarts = 4, std::uint64_t seed = 0);

template <class Scalar>
struct TraceEntry {
  std::size_t n = 0;
  ExtReal<Scalar> value;
  BoundStatus status = BoundStatus::exact;
  std::vector<std::size_t> witness;
};

template <class Scalar>
struct DiameterTrace {
  std::vector<TraceEntry<Scalar>> sequence;
  /// Max of the exact entries: a certified lower bound on D.
  ExtReal<Scalar> running_sup;
};

struct TraceOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool allow_heuristic = true;
  std::size_t restarts = 4;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
};

/// D_2 .. D_{n_max}; exact where the budget allows, heuristic otherwise.
/// Throws InvariantViolation if exact entries fail to be nondecreasing.
template <class Scalar>
DiameterTrace<Scalar> d_estimate(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n_max,
                                 const TraceOptions& options = {});

}  // namespace abspot
