#include "abspot/principles.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "abspot/linear_program.hpp"

namespace abspot {

namespace {

using Mask = std::uint32_t;

IndexSet members(Mask mask) {
  IndexSet out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(i);
  }
  return out;
}

/// Nonempty masks below 2^n ordered by popcount, then value.
std::vector<Mask> masks_by_size(std::size_t n) {
  std::vector<Mask> masks;
  for (Mask m = 1; m < (Mask(1) << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
  return masks;
}

template <class Scalar>
MaxPrincipleWitness<Scalar> make_witness(const Kernel<Scalar>& k, DiscreteMeasure<Scalar> mu, std::size_t y) {
  const auto u = potential(k, mu);
  const auto v = sup_potential(k, mu, Over::support_only);
  ExtReal<Scalar> gap = u[y].is_infinite() ? ExtReal<Scalar>::infinity() : ExtReal<Scalar>(Scalar(u[y].value() - v.value()));
  return {std::move(mu), y, gap};
}

}  // namespace

template <class Scalar>
MaxPrincipleVerdict<Scalar> max_principle_check(const Kernel<Scalar>& k, double tolerance) {
  const std::size_t n = k.size();
  if (n > kMaxPrincipleMaxPoints) {
    throw BudgetExceeded("maximum principle check enumerates supports and is limited to " +
                         std::to_string(kMaxPrincipleMaxPoints) +
                         " points; use max_principle_sample for a non-certifying search");
  }
  MaxPrincipleVerdict<Scalar> verdict;
  const Mask full = (Mask(1) << n) - 1;
  for (Mask mask : masks_by_size(n)) {
    if (mask == full) continue;
    const IndexSet s = members(mask);
    if (!k.is_finite_on(s, s)) continue;
    const std::size_t m = s.size();

    Scalar bound(0);
    for (auto x : s) {
      for (auto j : s) {
        if (k(x, j).value() > bound) bound = k(x, j).value();
      }
    }

    for (std::size_t y = 0; y < n; ++y) {
      if (mask & (Mask(1) << y)) continue;
      auto blocked = std::find_if(s.begin(), s.end(), [&](std::size_t j) { return k(y, j).is_infinite(); });
      if (blocked != s.end()) {
        verdict.holds = false;
        verdict.witness = make_witness(k, DiscreteMeasure<Scalar>::dirac(n, *blocked), y);
        return verdict;
      }

      // Variables p_0..p_{m-1}, t' = t + bound >= 0.
      std::vector<Scalar> objective(m + 1, Scalar(0));
      objective[m] = Scalar(1);
      std::vector<LpConstraint<Scalar>> cons;
      for (auto x : s) {
        LpConstraint<Scalar> c;
        c.coeffs.resize(m + 1);
        for (std::size_t a = 0; a < m; ++a) c.coeffs[a] = k(x, s[a]).value() - k(y, s[a]).value();
        c.coeffs[m] = Scalar(1);
        c.sense = Sense::less_equal;
        c.rhs = bound;
        cons.push_back(std::move(c));
      }
      LpConstraint<Scalar> total;
      total.coeffs.assign(m + 1, Scalar(1));
      total.coeffs[m] = Scalar(0);
      total.sense = Sense::equal;
      total.rhs = Scalar(1);
      cons.push_back(std::move(total));

      const auto sol = solve_lp(objective, cons);
      if (sol.status != LpStatus::optimal) throw std::logic_error("maximum principle LP not solved");
      const Scalar t = sol.objective - bound;
      if (leq_tol(t, Scalar(0), tolerance)) continue;

      std::vector<Scalar> p(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
      if constexpr (!ScalarTraits<Scalar>::exact) {
        double sum = 0.0;
        for (auto& x : p) {
          x = std::max(x, 0.0);
          sum += x;
        }
        for (auto& x : p) x /= sum;
      }
      verdict.holds = false;
      verdict.witness = make_witness(k, lift_measure<Scalar>(n, s, p, 1e-6), y);
      return verdict;
    }
  }
  return verdict;
}

MaxPrincipleSample<double> max_principle_sample(const Kernel<double>& k, std::size_t samples, std::uint64_t seed,
                                                std::size_t max_support) {
  const std::size_t n = k.size();
  MaxPrincipleSample<double> out;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<std::size_t> size_pick(1, std::max<std::size_t>(1, std::min(max_support, n)));
  IndexSet order = full_index_set(n);
  for (std::size_t it = 0; it < samples; ++it) {
    std::shuffle(order.begin(), order.end(), rng);
    IndexSet s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size_pick(rng)));
    std::sort(s.begin(), s.end());
    std::vector<double> w(s.size());
    double sum = 0.0;
    for (auto& x : w) sum += (x = expo(rng));
    for (auto& x : w) x /= sum;
    auto mu = lift_measure<double>(n, s, w, 1e-6);
    const auto u = potential(k, mu);
    std::size_t y = 0;
    for (std::size_t x = 1; x < n; ++x) {
      if (u[x] > u[y]) y = x;
    }
    ++out.samples;
    if (sup_potential(k, mu, Over::support_only).is_infinite()) continue;
    auto witness = make_witness(k, std::move(mu), y);
    if (!out.worst || witness.gap > out.worst->gap) out.worst = std::move(witness);
  }
  return out;
}

template <class Scalar>
EquivalenceReport<Scalar> equivalence_experiment(const Kernel<Scalar>& k, double tolerance) {
  const std::size_t n = k.size();
  if (!k.is_finite()) {
    throw ValidationError("the equivalence experiment needs a finite-valued kernel");
  }
  if (n > kEquivalenceMaxPoints) {
    throw BudgetExceeded("the equivalence experiment visits every subset and is limited to " +
                         std::to_string(kEquivalenceMaxPoints) + " points");
  }
  EquivalenceReport<Scalar> report;
  EnergyOptions eo;
  eo.tolerance = tolerance;
  bool all_equal = true;
  for (Mask mask = 1; mask < (Mask(1) << n); ++mask) {
    SubsetRow<Scalar> row;
    row.subset = members(mask);
    row.q = minimax_q(k, row.subset, tolerance).value;
    row.w = wiener_energy(k, row.subset, eo).w_value;
    row.equal = ext_eq_tol(row.q, row.w, tolerance);
    all_equal = all_equal && row.equal;
    report.rows.push_back(std::move(row));
  }
  const auto verdict = max_principle_check(k, tolerance);
  report.mp_holds = verdict.holds;
  report.mp_witness = verdict.witness;
  report.consistent = report.mp_holds == all_equal;
  if (!report.consistent && report.mp_holds) {
    for (const auto& row : report.rows) {
      if (!row.equal) report.offending.push_back(row.subset);
    }
  }
  return report;
}

#define ABSPOT_INSTANTIATE(S)                                                                \
  template MaxPrincipleVerdict<S> max_principle_check(const Kernel<S>&, double);             \
  template EquivalenceReport<S> equivalence_experiment(const Kernel<S>&, double);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
