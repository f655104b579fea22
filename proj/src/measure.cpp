#include "abspot/measure.hpp"

#include <cmath>

namespace abspot {

template <class Scalar>
DiscreteMeasure<Scalar>::DiscreteMeasure(std::vector<Scalar> weights, double tolerance)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw ValidationError("measure on an empty space");
  Scalar total(0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if constexpr (ScalarTraits<Scalar>::exact) {
      if (sgn(weights_[i]) < 0) throw ValidationError("negative weight at index " + std::to_string(i));
    } else {
      if (std::isnan(weights_[i]) || weights_[i] < -tolerance) {
        throw ValidationError("negative weight at index " + std::to_string(i));
      }
      if (weights_[i] < kWeightDust) weights_[i] = 0.0;
    }
    total += weights_[i];
  }
  if constexpr (ScalarTraits<Scalar>::exact) {
    if (total != 1) throw ValidationError("weights sum to " + format_rational(total) + ", not 1");
  } else {
    if (!(std::abs(total - 1.0) <= std::max(tolerance, 1e-12))) {
      throw ValidationError("weights sum to " + std::to_string(total) + ", not 1");
    }
    for (auto& w : weights_) w /= total;
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (ScalarTraits<Scalar>::sign(weights_[i]) > 0) support_.push_back(i);
  }
}

template <class Scalar>
DiscreteMeasure<Scalar> DiscreteMeasure<Scalar>::dirac(std::size_t n, std::size_t at) {
  if (at >= n) throw ValidationError("dirac index out of range");
  std::vector<Scalar> w(n, Scalar(0));
  w[at] = Scalar(1);
  return DiscreteMeasure(std::move(w));
}

template <class Scalar>
DiscreteMeasure<Scalar> DiscreteMeasure<Scalar>::uniform(std::size_t n) {
  return uniform_on(n, full_index_set(n));
}

template <class Scalar>
DiscreteMeasure<Scalar> DiscreteMeasure<Scalar>::uniform_on(std::size_t n, std::span<const std::size_t> support) {
  const IndexSet s = normalize_subset(support, n);
  std::vector<Scalar> w(n, Scalar(0));
  for (auto i : s) w[i] = Scalar(1) / Scalar(static_cast<long>(s.size()));
  return DiscreteMeasure(std::move(w));
}

namespace {

template <class Scalar>
void check_space(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu) {
  if (k.size() != mu.size()) {
    throw SpaceMismatch("measure has " + std::to_string(mu.size()) + " points, kernel space has " +
                        std::to_string(k.size()));
  }
}

}  // namespace

template <class Scalar>
PotentialVector<Scalar> potential(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu) {
  check_space(k, mu);
  PotentialVector<Scalar> u(k.size());
  for (std::size_t x = 0; x < k.size(); ++x) {
    for (auto j : mu.support()) u[x] += ext_scale(mu[j], k(x, j));
  }
  return u;
}

template <class Scalar>
ExtReal<Scalar> energy(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu) {
  const auto u = potential(k, mu);
  ExtReal<Scalar> total;
  for (auto i : mu.support()) total += ext_scale(mu[i], u[i]);
  return total;
}

template <class Scalar>
ExtReal<Scalar> max_over(const PotentialVector<Scalar>& u, std::span<const std::size_t> indices) {
  ExtReal<Scalar> best;
  for (auto i : indices) {
    if (u.at(i) > best) best = u[i];
  }
  return best;
}

template <class Scalar>
ExtReal<Scalar> sup_potential(const Kernel<Scalar>& k, const DiscreteMeasure<Scalar>& mu, Over over) {
  const auto u = potential(k, mu);
  if (over == Over::support_only) return max_over(u, std::span<const std::size_t>(mu.support()));
  const auto all = full_index_set(k.size());
  return max_over(u, std::span<const std::size_t>(all));
}

template <class Scalar>
DiscreteMeasure<Scalar> lift_measure(std::size_t n, std::span<const std::size_t> subset, std::span<const Scalar> w,
                                     double tolerance) {
  if (subset.size() != w.size()) throw SpaceMismatch("weights and subset differ in length");
  std::vector<Scalar> full(n, Scalar(0));
  for (std::size_t i = 0; i < subset.size(); ++i) full.at(subset[i]) = w[i];
  return DiscreteMeasure<Scalar>(std::move(full), tolerance);
}

#define ABSPOT_INSTANTIATE(S)                                                                       \
  template class DiscreteMeasure<S>;                                                                \
  template PotentialVector<S> potential(const Kernel<S>&, const DiscreteMeasure<S>&);              \
  template ExtReal<S> energy(const Kernel<S>&, const DiscreteMeasure<S>&);                         \
  template ExtReal<S> sup_potential(const Kernel<S>&, const DiscreteMeasure<S>&, Over);            \
  template ExtReal<S> max_over(const PotentialVector<S>&, std::span<const std::size_t>);           \
  template DiscreteMeasure<S> lift_measure(std::size_t, std::span<const std::size_t>, std::span<const S>, double);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
