#include "abspot/diameter.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

namespace abspot {

const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::exact:
      return "exact";
    case BoundStatus::heuristic_upper_bound:
      return "heuristic-upper-bound";
    case BoundStatus::heuristic_lower_bound:
      return "heuristic-lower-bound";
  }
  return "?";
}

std::uint64_t multiset_count(std::size_t points, std::size_t n) {
  if (points == 0) return n == 0 ? 1 : 0;
  // C(points + n - 1, n), computed incrementally; each prefix is an integer.
  unsigned __int128 c = 1;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 1; i <= n; ++i) {
    c = c * (points - 1 + i) / i;
    if (c > cap) return cap;
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

template <class Scalar>
Scalar pair_scale(std::size_t n) {
  return Scalar(Scalar(2) / Scalar(static_cast<long>(n * (n - 1))));
}

template <class Scalar>
bool strictly_less(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return a < b;
  } else {
    if (a.is_infinite() || b.is_infinite()) return a < b;
    return a.value() < b.value() - 1e-14 * (1.0 + std::abs(b.value()));
  }
}

}  // namespace

template <class Scalar>
ExtReal<Scalar> average_pair_value(const Kernel<Scalar>& k, std::span<const std::size_t> points) {
  const std::size_t n = points.size();
  if (n < 2) throw ValidationError("average pair value needs at least two points");
  ExtReal<Scalar> sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) sum += k(points[i], points[j]);
  }
  return ext_scale(pair_scale<Scalar>(n), sum);
}

template <class Scalar>
FeketeSystem<Scalar> dn_exact(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n,
                              std::uint64_t budget) {
  if (n < 2) throw ValidationError("D_n needs n >= 2");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  const std::size_t s = subset.size();
  const std::uint64_t count = multiset_count(s, n);
  if (count > budget) {
    std::ostringstream msg;
    msg << "D_" << n << " over " << s << " points needs " << count << " candidates (budget " << budget
        << "); use fekete_heuristic";
    throw BudgetExceeded(msg.str());
  }

  std::vector<std::size_t> pos(n), best_pos;
  std::vector<ExtReal<Scalar>> partial(n + 1);
  ExtReal<Scalar> best;
  bool found = false;

  // Lexicographic DFS over nondecreasing position sequences. Kernel values
  // are nonnegative, so a prefix whose pair sum already reaches the best
  // complete value cannot win (ties keep the earlier, lex-smaller multiset).
  auto dfs = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == n) {
      if (!found || partial[n] < best) {
        found = true;
        best = partial[n];
        best_pos = pos;
      }
      return;
    }
    for (std::size_t c = start; c < s; ++c) {
      ExtReal<Scalar> sum = partial[depth];
      for (std::size_t t = 0; t < depth; ++t) sum += k(subset[c], subset[pos[t]]);
      if (found && sum >= best) continue;
      partial[depth + 1] = sum;
      pos[depth] = c;
      self(self, depth + 1, c);
    }
  };
  dfs(dfs, 0, 0);

  FeketeSystem<Scalar> out;
  for (auto p : best_pos) out.indices.push_back(subset[p]);
  out.value = ext_scale(pair_scale<Scalar>(n), best);
  out.status = BoundStatus::exact;
  return out;
}

template <class Scalar>
FeketeSystem<Scalar> fekete_heuristic(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n,
                                      std::size_t restarts, std::uint64_t seed) {
  if (n < 2) throw ValidationError("D_n needs n >= 2");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  const std::size_t s = subset.size();

  auto cost = [&](const std::vector<std::size_t>& w, std::size_t x, std::size_t skip) {
    ExtReal<Scalar> sum;
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (t != skip) sum += k(x, w[t]);
    }
    return sum;
  };

  auto local_search = [&](std::vector<std::size_t> w) {
    constexpr std::size_t kMaxSweeps = 10000;
    for (std::size_t sweep = 0; sweep < kMaxSweeps; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        ExtReal<Scalar> best = cost(w, w[i], i);
        std::size_t best_x = w[i];
        for (auto x : subset) {
          const auto c = cost(w, x, i);
          if (strictly_less(c, best)) {
            best = c;
            best_x = x;
          }
        }
        if (best_x != w[i]) {
          w[i] = best_x;
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
    std::vector<std::size_t> greedy{subset.front()};
    while (greedy.size() < n) {
      std::size_t best_x = subset.front();
      ExtReal<Scalar> best = ExtReal<Scalar>::infinity();
      bool any = false;
      for (auto x : subset) {
        const auto c = cost(greedy, x, greedy.size());
        if (!any || c < best) {
          best = c;
          best_x = x;
          any = true;
        }
      }
      greedy.push_back(best_x);
    }
    starts.push_back(std::move(greedy));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, s - 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<std::size_t> w(n);
    for (auto& x : w) x = subset[pick(rng)];
    starts.push_back(std::move(w));
  }

  FeketeSystem<Scalar> out;
  bool found = false;
  for (auto& start : starts) {
    auto w = local_search(std::move(start));
    const auto value = average_pair_value(k, std::span<const std::size_t>(w));
    if (!found || value < out.value || (value == out.value && w < out.indices)) {
      out.indices = std::move(w);
      out.value = value;
      found = true;
    }
  }
  out.status = BoundStatus::heuristic_upper_bound;
  return out;
}

template <class Scalar>
DiameterTrace<Scalar> d_estimate(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, std::size_t n_max,
                                 const TraceOptions& options) {
  if (n_max < 2) throw ValidationError("n_max must be >= 2");
  const IndexSet subset = normalize_subset(subset_in, k.size());
  DiameterTrace<Scalar> trace;
  bool any_exact = false;
  for (std::size_t n = 2; n <= n_max; ++n) {
    FeketeSystem<Scalar> sys;
    if (multiset_count(subset.size(), n) <= options.budget) {
      sys = dn_exact(k, subset, n, options.budget);
    } else if (options.allow_heuristic) {
      sys = fekete_heuristic(k, subset, n, options.restarts, options.seed);
    } else {
      throw BudgetExceeded("D_" + std::to_string(n) + " exceeds the enumeration budget and heuristics are disabled");
    }
    if (sys.status == BoundStatus::exact) {
      if (any_exact && !ext_leq_tol(trace.running_sup, sys.value, options.tolerance)) {
        std::ostringstream msg;
        msg << "D_n not monotone: D_" << n << " = " << sys.value << " < " << trace.running_sup;
        throw InvariantViolation(msg.str());
      }
      if (!any_exact || sys.value > trace.running_sup) trace.running_sup = sys.value;
      any_exact = true;
    }
    trace.sequence.push_back({n, sys.value, sys.status, std::move(sys.indices)});
  }
  return trace;
}

#define ABSPOT_INSTANTIATE(S)                                                                                    \
  template ExtReal<S> average_pair_value(const Kernel<S>&, std::span<const std::size_t>);                       \
  template FeketeSystem<S> dn_exact(const Kernel<S>&, std::span<const std::size_t>, std::size_t, std::uint64_t); \
  template FeketeSystem<S> fekete_heuristic(const Kernel<S>&, std::span<const std::size_t>, std::size_t,        \
                                            std::size_t, std::uint64_t);                                         \
  template DiameterTrace<S> d_estimate(const Kernel<S>&, std::span<const std::size_t>, std::size_t,              \
                                       const TraceOptions&);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
