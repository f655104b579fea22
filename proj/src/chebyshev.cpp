#include "abspot/chebyshev.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "abspot/energy.hpp"

namespace abspot {

LogPolynomial::LogPolynomial(std::vector<std::size_t> zeros) : zeros_(std::move(zeros)) {
  if (zeros_.empty()) throw ValidationError("a log-polynomial needs at least one zero");
  std::sort(zeros_.begin(), zeros_.end());
}

LogPolynomial operator+(const LogPolynomial& a, const LogPolynomial& b) {
  std::vector<std::size_t> z = a.zeros_;
  z.insert(z.end(), b.zeros_.begin(), b.zeros_.end());
  return LogPolynomial(std::move(z));
}

namespace {

template <class Scalar>
Scalar inverse(std::size_t n) {
  return Scalar(Scalar(1) / Scalar(static_cast<long>(n)));
}

template <class Scalar>
bool strictly_greater(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return a > b;
  } else {
    if (a.is_infinite() || b.is_infinite()) return a > b;
    return a.value() > b.value() + 1e-14 * (1.0 + std::abs(b.value()));
  }
}

template <class Scalar>
ExtReal<Scalar> min_of(const std::vector<ExtReal<Scalar>>& v) {
  ExtReal<Scalar> best = v.front();
  for (const auto& x : v) {
    if (x < best) best = x;
  }
  return best;
}

}  // namespace

template <class Scalar>
ExtReal<Scalar> logpoly_inf(const Kernel<Scalar>& k, std::span<const std::size_t> zeros,
                            std::span<const std::size_t> subset_in) {
  if (zeros.empty()) throw ValidationError("logpoly_inf needs at least one zero");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  for (auto z : zeros) {
    if (z >= k.size()) throw ValidationError("zero index out of range");
  }
  std::vector<ExtReal<Scalar>> sums(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (auto z : zeros) sums[i] += k(subset[i], z);
  }
  return ext_scale(inverse<Scalar>(zeros.size()), min_of(sums));
}

template <class Scalar>
ChebyshevResult<Scalar> mn_exact(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n,
                                 std::uint64_t budget) {
  if (n < 1) throw ValidationError("M_n needs n >= 1");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  const std::size_t s = subset.size();
  const std::uint64_t count = multiset_count(s, n);
  if (count > budget) {
    std::ostringstream msg;
    msg << "M_" << n << " over " << s << " points needs " << count << " candidates (budget " << budget
        << "); use mn_heuristic";
    throw BudgetExceeded(msg.str());
  }

  // sums[d][x] = sum over the first d zeros of k(subset[x], zero).
  std::vector<std::vector<ExtReal<Scalar>>> sums(n + 1, std::vector<ExtReal<Scalar>>(s));
  std::vector<std::size_t> pos(n), best_pos;
  ExtReal<Scalar> best;
  bool found = false;

  auto dfs = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == n) {
      const auto inf = min_of(sums[n]);
      if (!found || inf > best) {
        found = true;
        best = inf;
        best_pos = pos;
      }
      return;
    }
    for (std::size_t c = start; c < s; ++c) {
      for (std::size_t x = 0; x < s; ++x) sums[depth + 1][x] = sums[depth][x] + k(subset[x], subset[c]);
      pos[depth] = c;
      self(self, depth + 1, c);
    }
  };
  dfs(dfs, 0, 0);

  ChebyshevResult<Scalar> out;
  for (auto p : best_pos) out.zeros.push_back(subset[p]);
  out.value = ext_scale(inverse<Scalar>(n), best);
  out.status = BoundStatus::exact;
  return out;
}

template <class Scalar>
ChebyshevResult<Scalar> mn_heuristic(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n,
                                     std::size_t restarts, std::uint64_t seed) {
  if (n < 1) throw ValidationError("M_n needs n >= 1");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  const std::size_t s = subset.size();

  // inf over x of base[x] + k(x, z)
  auto inf_with = [&](const std::vector<ExtReal<Scalar>>& base, std::size_t z) {
    ExtReal<Scalar> best = ExtReal<Scalar>::infinity();
    for (std::size_t x = 0; x < s; ++x) {
      const auto v = base[x] + k(subset[x], z);
      if (v < best) best = v;
    }
    return best;
  };
  auto base_without = [&](const std::vector<std::size_t>& w, std::size_t skip) {
    std::vector<ExtReal<Scalar>> base(s);
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t t = 0; t < w.size(); ++t) {
        if (t != skip) base[x] += k(subset[x], w[t]);
      }
    }
    return base;
  };

  auto local_search = [&](std::vector<std::size_t> w) {
    constexpr std::size_t kMaxSweeps = 10000;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto base = base_without(w, i);
        ExtReal<Scalar> best = inf_with(base, w[i]);
        std::size_t best_z = w[i];
        for (auto z : subset) {
          const auto v = inf_with(base, z);
          if (strictly_greater(v, best)) {
            best = v;
            best_z = z;
          }
        }
        if (best_z != w[i]) {
          w[i] = best_z;
          improved = true;
        }
      }
      if (!improved) break;
    }
    std::sort(w.begin(), w.end());
    return w;
  };

  std::vector<std::vector<std::size_t>> starts;
  {
    std::vector<std::size_t> greedy;
    while (greedy.size() < n) {
      const auto base = base_without(greedy, greedy.size());
      std::size_t best_z = subset.front();
      ExtReal<Scalar> best;
      bool any = false;
      for (auto z : subset) {
        const auto v = inf_with(base, z);
        if (!any || v > best) {
          best = v;
          best_z = z;
          any = true;
        }
      }
      greedy.push_back(best_z);
    }
    starts.push_back(std::move(greedy));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, s - 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<std::size_t> w(n);
    for (auto& z : w) z = subset[pick(rng)];
    starts.push_back(std::move(w));
  }

  ChebyshevResult<Scalar> out;
  bool found = false;
  for (auto& start : starts) {
    auto w = local_search(std::move(start));
    const auto value = logpoly_inf(k, std::span<const std::size_t>(w), subset);
    if (!found || value > out.value || (value == out.value && w < out.zeros)) {
      out.zeros = std::move(w);
      out.value = value;
      found = true;
    }
  }
  out.status = BoundStatus::heuristic_lower_bound;
  return out;
}

template <class Scalar>
ChebyshevTrace<Scalar> m_estimate(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n_max,
                                  const ChebyshevTraceOptions& options) {
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  ChebyshevTrace<Scalar> trace;
  bool any_exact = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    ChebyshevResult<Scalar> r;
    if (multiset_count(subset.size(), n) <= options.budget) {
      r = mn_exact(k, subset, n, options.budget);
    } else if (options.allow_heuristic) {
      r = mn_heuristic(k, subset, n, options.restarts, options.seed);
    } else {
      throw BudgetExceeded("M_" + std::to_string(n) + " exceeds the enumeration budget and heuristics are disabled");
    }
    if (r.status == BoundStatus::exact) {
      if (!any_exact || r.value > trace.running_sup) trace.running_sup = r.value;
      any_exact = true;
    }
    trace.sequence.push_back({n, r.value, r.status, std::move(r.zeros)});
  }

  // (a+b) M_{a+b} >= a M_a + b M_b on exact entries; sequence[i] holds n = i+1.
  const auto& seq = trace.sequence;
  for (std::size_t a = 1; a <= n_max; ++a) {
    for (std::size_t b = a; a + b <= n_max; ++b) {
      const auto& ea = seq[a - 1];
      const auto& eb = seq[b - 1];
      const auto& eab = seq[a + b - 1];
      if (ea.status != BoundStatus::exact || eb.status != BoundStatus::exact || eab.status != BoundStatus::exact) {
        continue;
      }
      const auto lhs = ext_scale(Scalar(static_cast<long>(a + b)), eab.value);
      const auto rhs = ext_scale(Scalar(static_cast<long>(a)), ea.value) +
                       ext_scale(Scalar(static_cast<long>(b)), eb.value);
      if (!ext_leq_tol(rhs, lhs, options.tolerance)) {
        std::ostringstream msg;
        msg << "superadditivity fails: " << (a + b) << "*M_" << (a + b) << " = " << lhs << " < " << rhs;
        throw InvariantViolation(msg.str());
      }
    }
  }

  if (subset.size() <= options.q_check_max_points) {
    trace.q_reference = minimax_q(k, subset, options.tolerance).value;
    if (any_exact && !ext_leq_tol(trace.running_sup, *trace.q_reference, options.tolerance)) {
      std::ostringstream msg;
      msg << "sup M_n = " << trace.running_sup << " exceeds q = " << *trace.q_reference;
      throw InvariantViolation(msg.str());
    }
  }
  return trace;
}

#define ABSPOT_INSTANTIATE(S)                                                                                    \
  template ExtReal<S> logpoly_inf(const Kernel<S>&, std::span<const std::size_t>, std::span<const std::size_t>); \
  template ChebyshevResult<S> mn_exact(const Kernel<S>&, std::span<const std::size_t>, std::size_t,            \
                                       std::uint64_t);                                                           \
  template ChebyshevResult<S> mn_heuristic(const Kernel<S>&, std::span<const std::size_t>, std::size_t,        \
                                           std::size_t, std::uint64_t);                                          \
  template ChebyshevTrace<S> m_estimate(const Kernel<S>&, std::span<const std::size_t>, std::size_t,            \
                                        const ChebyshevTraceOptions&);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
