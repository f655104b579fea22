#pragma once

#include <optional>
#include <span>
#include <vector>

#include "abspot/diameter.hpp"

namespace abspot {

/// x -> sum_j k(x, w_j) for a multiset of zeros w_j.
class LogPolynomial {
 public:
  explicit LogPolynomial(std::vector<std::size_t> zeros);

  std::size_t degree() const { return zeros_.size(); }
  const std::vector<std::size_t>& zeros() const { return zeros_; }

  template <class Scalar>
  ExtReal<Scalar> operator()(const Kernel<Scalar>& k, std::size_t x) const {
    ExtReal<Scalar> sum;
    for (auto w : zeros_) sum += k(x, w);
    return sum;
  }

  /// Degrees add; zeros are merged.
  friend LogPolynomial operator+(const LogPolynomial& a, const LogPolynomial& b);

 private:
  std::vector<std::size_t> zeros_;
};

/// min over x in subset of (1/n) sum_j k(x, w_j).
template <class Scalar>
ExtReal<Scalar> logpoly_inf(const Kernel<Scalar>& k, std::span<const std::size_t> zeros,
                            std::span<const std::size_t> subset);

template <class Scalar>
struct ChebyshevResult {
  ExtReal<Scalar> value;
  std::vector<std::size_t> zeros;
  BoundStatus status = BoundStatus::exact;
};

/// M_n over `subset` by exhaustive enumeration of zero multisets; the
/// lexicographically smallest maximizer is returned.
template <class Scalar>
ChebyshevResult<Scalar> mn_exact(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n,
                                 std::uint64_t budget = kDefaultEnumerationBudget);

/// Best-response exchange on single zeros; the value is a lower bound on M_n.
template <class Scalar>
ChebyshevResult<Scalar> mn_heuristic(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n,
                                     std::size_t restarts = 4, std::uint64_t seed = 0);

template <class Scalar>
struct ChebyshevTrace {
  std::vector<TraceEntry<Scalar>> sequence;
  /// Max of the exact entries. n*M_n is superadditive, so M = sup_n M_n and
  /// this is a certified lower bound on M.
  ExtReal<Scalar> running_sup;
  /// q over the same subset, when it was computed for the cross-check.
  std::optional<ExtReal<Scalar>> q_reference;
};

struct ChebyshevTraceOptions : TraceOptions {
  /// Cross-check running_sup <= q when |subset| is at most this.
  std::size_t q_check_max_points = 64;
};

/// M_1 .. M_{n_max}. Throws InvariantViolation if exact entries break
/// superadditivity or exceed q.
template <class Scalar>
ChebyshevTrace<Scalar> m_estimate(const Kernel<Scalar>& k, std::span<const std::size_t> subset, std::size_t n_max,
                                  const ChebyshevTraceOptions& options = {});

}  // namespace abspot
