#include "abspot/energy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "abspot/linear_program.hpp"

namespace abspot {

const char* to_string(Certification c) {
  switch (c) {
    case Certification::exact_rational:
      return "exact-rational";
    case Certification::float_certified:
      return "float-certified";
    case Certification::heuristic_upper_bound:
      return "heuristic-upper-bound";
    case Certification::heuristic_lower_bound:
      return "heuristic-lower-bound";
  }
  return "?";
}

namespace {

using Mask = std::uint32_t;

constexpr std::size_t kMaxMaskPoints = 30;

IndexSet positions(Mask mask) {
  IndexSet out;
  for (std::size_t i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(i);
  }
  return out;
}

/// finite[i] = bitmask of subset positions j with k(subset[i], subset[j]) < inf.
template <class Scalar>
std::vector<Mask> finite_masks(const Kernel<Scalar>& k, const IndexSet& subset) {
  std::vector<Mask> finite(subset.size(), 0);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = 0; j < subset.size(); ++j) {
      if (k(subset[i], subset[j]).is_finite()) finite[i] |= Mask(1) << j;
    }
  }
  return finite;
}

bool block_finite(Mask mask, const std::vector<Mask>& finite) {
  for (Mask m = mask; m != 0; m &= m - 1) {
    const auto i = static_cast<std::size_t>(__builtin_ctz(m));
    if ((mask & ~finite[i]) != 0) return false;
  }
  return true;
}

template <class Scalar>
Scalar quadratic_form(const Kernel<Scalar>& k, const IndexSet& pts, const std::vector<Scalar>& p) {
  Scalar total(0);
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) total += p[a] * p[b] * k(pts[a], pts[b]).value();
  }
  return total;
}

template <class Scalar>
EquilibriumResult<Scalar> enumerate_faces(const Kernel<Scalar>& k, const IndexSet& subset, double tol) {
  const std::size_t s = subset.size();
  const auto finite = finite_masks(k, subset);
  EquilibriumResult<Scalar> out;
  out.w_value = ExtReal<Scalar>::infinity();
  out.certification = ScalarTraits<Scalar>::exact ? Certification::exact_rational : Certification::float_certified;

  bool found = false;
  Scalar best{};
  IndexSet best_pts;
  std::vector<Scalar> best_p;
  for (Mask mask = 1; mask < (Mask(1) << s); ++mask) {
    if (!block_finite(mask, finite)) continue;
    const IndexSet pos = positions(mask);
    const std::size_t m = pos.size();
    IndexSet pts(m);
    for (std::size_t a = 0; a < m; ++a) pts[a] = subset[pos[a]];

    DenseMatrix<Scalar> sys(m + 1, std::vector<Scalar>(m + 1, Scalar(0)));
    std::vector<Scalar> rhs(m + 1, Scalar(0));
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) sys[a][b] = k(pts[a], pts[b]).value();
      sys[a][m] = Scalar(-1);
      sys[m][a] = Scalar(1);
    }
    rhs[m] = Scalar(1);
    auto sol = solve_square(std::move(sys), std::move(rhs));
    if (!sol) continue;

    std::vector<Scalar> p(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m));
    Scalar value;
    if constexpr (ScalarTraits<Scalar>::exact) {
      if (std::any_of(p.begin(), p.end(), [](const Rational& x) { return sgn(x) < 0; })) continue;
      value = (*sol)[m];
    } else {
      if (std::any_of(p.begin(), p.end(), [tol](double x) { return x < -tol; })) continue;
      double total = 0.0;
      for (auto& x : p) {
        x = std::max(x, 0.0);
        total += x;
      }
      for (auto& x : p) x /= total;
      value = quadratic_form(k, pts, p);
    }
    if (!found || value < best) {
      found = true;
      best = value;
      best_pts = pts;
      best_p = p;
    }
  }
  if (!found) return out;
  out.w_value = ExtReal<Scalar>(best);
  out.minimizer = lift_measure<Scalar>(k.size(), best_pts, best_p);
  return out;
}

// --- floating heuristic beyond the enumeration threshold -------------------

void project_to_simplex(Eigen::VectorXd& v) {
  const auto n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumulative += u[static_cast<std::size_t>(i)];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0) theta = t;
  }
  v = (v.array() - theta).max(0.0);
}

// Accelerated projected gradient on p^T A p over the simplex.
Eigen::VectorXd descend(const Eigen::MatrixXd& a, Eigen::VectorXd p, std::size_t iterations, double tol) {
  const double lipschitz = 2.0 * a.cwiseAbs().rowwise().sum().maxCoeff();
  if (lipschitz <= 0.0) return p;
  const double step = 1.0 / lipschitz;
  Eigen::VectorXd y = p, prev = p;
  double momentum = 1.0;
  double f_prev = p.dot(a * p);
  for (std::size_t it = 0; it < iterations; ++it) {
    Eigen::VectorXd next = y - step * 2.0 * (a * y);
    project_to_simplex(next);
    const double f = next.dot(a * next);
    if (f > f_prev) {  // restart momentum
      momentum = 1.0;
      y = p;
      continue;
    }
    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / m_next) * (next - p);
    prev = p;
    p = next;
    momentum = m_next;
    if (f_prev - f <= tol * 1e-3 * std::max(1.0, std::abs(f)) && (p - prev).lpNorm<1>() < 1e-12) break;
    f_prev = f;
  }
  return p;
}

template <class Scalar>
EquilibriumResult<Scalar> descend_energy(const Kernel<Scalar>& k, const IndexSet& subset, const EnergyOptions& opt) {
  // Points able to carry mass: finite diagonal and pairwise finite with the
  // points kept before them.
  IndexSet pts;
  for (auto x : subset) {
    if (k(x, x).is_infinite()) continue;
    if (std::all_of(pts.begin(), pts.end(), [&](std::size_t y) { return k(x, y).is_finite(); })) pts.push_back(x);
  }
  EquilibriumResult<Scalar> out;
  out.w_value = ExtReal<Scalar>::infinity();
  out.certification = Certification::heuristic_upper_bound;
  if (pts.empty()) {
    // Every point has infinite self-energy, so every measure has W = inf.
    if (std::all_of(subset.begin(), subset.end(), [&](std::size_t x) { return k(x, x).is_infinite(); })) {
      out.certification =
          ScalarTraits<Scalar>::exact ? Certification::exact_rational : Certification::float_certified;
    }
    return out;
  }

  const auto m = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      a(i, j) = k(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]).to_double();
    }
  }

  std::vector<Eigen::VectorXd> starts;
  Eigen::VectorXd stationary = a.partialPivLu().solve(Eigen::VectorXd::Ones(m));
  const bool stationary_ok = stationary.allFinite() && stationary.sum() != 0.0;
  if (stationary_ok) stationary /= stationary.sum();

  std::vector<Eigen::VectorXd> candidates;
  if (stationary_ok && (stationary.array() > 0.0).all()) {
    // Interior stationary point: KKT holds with full support.
    candidates.push_back(stationary);
  } else {
    if (stationary_ok) {
      Eigen::VectorXd clipped = stationary.cwiseMax(0.0);
      if (clipped.sum() > 0) starts.push_back(clipped / clipped.sum());
    }
    starts.push_back(Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m)));
    std::mt19937_64 rng(opt.seed);
    std::exponential_distribution<double> expo(1.0);
    for (std::size_t r = 0; r < opt.restarts; ++r) {
      Eigen::VectorXd p(m);
      for (Eigen::Index i = 0; i < m; ++i) p(i) = expo(rng);
      starts.push_back(p / p.sum());
    }
    for (auto& s : starts) candidates.push_back(descend(a, s, opt.max_iterations, opt.tolerance));
  }

  double best = HUGE_VAL;
  Eigen::VectorXd best_p;
  for (const auto& p : candidates) {
    const double f = p.dot(a * p);
    if (f < best) {
      best = f;
      best_p = p;
    }
  }

  std::vector<Scalar> w(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w[i] = ScalarTraits<Scalar>::from_double(best_p(static_cast<Eigen::Index>(i)));
  }
  if constexpr (ScalarTraits<Scalar>::exact) {
    Rational total(0);
    for (const auto& x : w) total += x;
    for (auto& x : w) x /= total;
  }
  auto mu = lift_measure<Scalar>(k.size(), pts, w, 1e-6);
  out.w_value = energy(k, mu);
  out.minimizer = std::move(mu);
  return out;
}

// --- minimax LPs ------------------------------------------------------------

/// min t s.t. sum_j K[i][j] p_j <= t for i in rows, p a probability vector on
/// cols. Returns nullopt if cols is empty.
template <class Scalar>
std::optional<std::pair<Scalar, std::vector<Scalar>>> minimax_lp(const Kernel<Scalar>& k, const IndexSet& rows,
                                                                 const IndexSet& cols, double tol) {
  if (cols.empty()) return std::nullopt;
  const std::size_t nc = cols.size();
  std::vector<Scalar> objective(nc + 1, Scalar(0));
  objective[nc] = Scalar(-1);
  std::vector<LpConstraint<Scalar>> cons;
  cons.reserve(rows.size() + 1);
  for (auto i : rows) {
    LpConstraint<Scalar> c;
    c.coeffs.resize(nc + 1);
    for (std::size_t j = 0; j < nc; ++j) c.coeffs[j] = k(i, cols[j]).value();
    c.coeffs[nc] = Scalar(-1);
    c.sense = Sense::less_equal;
    c.rhs = Scalar(0);
    cons.push_back(std::move(c));
  }
  LpConstraint<Scalar> simplex;
  simplex.coeffs.assign(nc + 1, Scalar(1));
  simplex.coeffs[nc] = Scalar(0);
  simplex.sense = Sense::equal;
  simplex.rhs = Scalar(1);
  cons.push_back(std::move(simplex));

  auto sol = solve_lp(objective, cons, std::min(tol, 1e-11) > 0 ? std::min(tol, 1e-11) : 1e-11);
  if (sol.status != LpStatus::optimal) throw std::logic_error("minimax LP not solved (cannot happen for admissible supports)");
  std::vector<Scalar> p(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(nc));
  if constexpr (!ScalarTraits<Scalar>::exact) {
    double total = 0.0;
    for (auto& x : p) {
      x = std::max(x, 0.0);
      total += x;
    }
    for (auto& x : p) x /= total;
  }
  return std::make_pair(sol.x[nc], std::move(p));
}

template <class Scalar>
MinimaxValue<Scalar> minimax_over_rows(const Kernel<Scalar>& k, const IndexSet& subset, const IndexSet& rows,
                                       double tol) {
  IndexSet cols;
  for (auto j : subset) {
    if (std::all_of(rows.begin(), rows.end(), [&](std::size_t i) { return k(i, j).is_finite(); })) cols.push_back(j);
  }
  MinimaxValue<Scalar> out;
  out.value = ExtReal<Scalar>::infinity();
  auto sol = minimax_lp(k, rows, cols, tol);
  if (!sol) return out;
  auto mu = lift_measure<Scalar>(k.size(), cols, sol->second);
  // The potential of the returned measure is the reported value: its max
  // over the rows, evaluated directly.
  out.value = max_over(potential(k, mu), std::span<const std::size_t>(rows));
  out.witness = std::move(mu);
  return out;
}

}  // namespace

template <class Scalar>
EquilibriumResult<Scalar> wiener_energy(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in,
                                        const EnergyOptions& options) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  if (subset.size() <= std::min(options.enumeration_threshold, kMaxMaskPoints)) {
    return enumerate_faces(k, subset, options.tolerance);
  }
  return descend_energy(k, subset, options);
}

template <class Scalar>
MinimaxValue<Scalar> minimax_q(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, double tolerance) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  return minimax_over_rows(k, subset, subset, tolerance);
}

template <class Scalar>
MinimaxValue<Scalar> minimax_u(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, double tolerance) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  return minimax_over_rows(k, subset, full_index_set(k.size()), tolerance);
}

template <class Scalar>
MinimaxValue<Scalar> minimax_v(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in, double tolerance) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  if (subset.size() > kSupportEnumerationMaxPoints) {
    throw BudgetExceeded("v enumerates supports and is limited to " + std::to_string(kSupportEnumerationMaxPoints) +
                         " points");
  }
  const auto finite = finite_masks(k, subset);
  MinimaxValue<Scalar> out;
  out.value = ExtReal<Scalar>::infinity();
  bool found = false;
  for (Mask mask = 1; mask < (Mask(1) << subset.size()); ++mask) {
    if (!block_finite(mask, finite)) continue;
    IndexSet pts;
    for (auto p : positions(mask)) pts.push_back(subset[p]);
    auto sol = minimax_lp(k, pts, pts, tolerance);
    auto mu = lift_measure<Scalar>(k.size(), pts, sol->second);
    const auto value = sup_potential(k, mu, Over::support_only);
    if (!found || value < out.value) {
      found = true;
      out.value = value;
      out.witness = std::move(mu);
    }
  }
  return out;
}

template <class Scalar>
MinimaxEnergies<Scalar> minimax_energies(const Kernel<Scalar>& k, std::span<const std::size_t> subset,
                                         double tolerance) {
  return {minimax_u(k, subset, tolerance), minimax_v(k, subset, tolerance), minimax_q(k, subset, tolerance)};
}

template <class Scalar>
FrostmanReport frostman_verify(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in,
                               const DiscreteMeasure<Scalar>& mu, const ExtReal<Scalar>& w_value, double tolerance) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  if (w_value.is_infinite()) throw ValidationError("Frostman conditions need a finite energy");
  for (auto j : mu.support()) {
    if (!std::binary_search(subset.begin(), subset.end(), j)) {
      throw ValidationError("measure charges point " + std::to_string(j) + " outside the subset");
    }
  }
  const auto u = potential(k, mu);
  FrostmanReport report;
  for (auto x : subset) {
    if (k(x, x).is_infinite()) {
      report.exceptional_points.push_back(x);
      continue;
    }
    if (!ext_leq_tol(w_value, u[x], tolerance)) report.lower_violations.push_back(x);
  }
  for (auto x : mu.support()) {
    if (!ext_leq_tol(u[x], w_value, tolerance)) report.support_upper_violations.push_back(x);
    if (!ext_eq_tol(u[x], w_value, tolerance)) report.ae_equality_violations.push_back(x);
  }
  report.lower_ok = report.lower_violations.empty();
  report.support_upper_ok = report.support_upper_violations.empty();
  report.ae_equality_ok = report.ae_equality_violations.empty();
  return report;
}

template <class Scalar>
RendezvousResult<Scalar> rendezvous(const Kernel<Scalar>& k, std::span<const std::size_t> subset_in,
                                    double tolerance) {
  const IndexSet subset = normalize_subset(subset_in, k.size());
  if (!k.is_finite_on(subset, subset)) {
    throw ValidationError("rendezvous numbers are defined here for finite-valued kernels only");
  }
  RendezvousResult<Scalar> out;
  const auto q = minimax_q(k, subset, tolerance);
  out.r_value = q.value;
  const Scalar r = q.value.value();
  const std::size_t s = subset.size();

  // {p >= 0, sum p = 1, K p = r on the subset}: every invariant measure.
  std::vector<LpConstraint<Scalar>> cons;
  for (auto i : subset) {
    LpConstraint<Scalar> c;
    c.coeffs.resize(s);
    for (std::size_t j = 0; j < s; ++j) c.coeffs[j] = k(i, subset[j]).value();
    if constexpr (ScalarTraits<Scalar>::exact) {
      c.sense = Sense::equal;
      c.rhs = r;
      cons.push_back(std::move(c));
    } else {
      LpConstraint<Scalar> lower = c;
      c.sense = Sense::less_equal;
      c.rhs = r + tolerance;
      lower.sense = Sense::greater_equal;
      lower.rhs = r - tolerance;
      cons.push_back(std::move(c));
      cons.push_back(std::move(lower));
    }
  }
  LpConstraint<Scalar> total;
  total.coeffs.assign(s, Scalar(1));
  total.sense = Sense::equal;
  total.rhs = Scalar(1);
  cons.push_back(std::move(total));

  const double eps = 1e-11;
  if (solve_lp(std::vector<Scalar>(s, Scalar(0)), cons, eps).status != LpStatus::optimal) return out;

  // Largest support: average the per-coordinate maximizers that charge
  // their coordinate. Any feasible point's support lies inside this union.
  std::vector<Scalar> avg(s, Scalar(0));
  std::size_t used = 0;
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Scalar> obj(s, Scalar(0));
    obj[j] = Scalar(1);
    const auto sol = solve_lp(obj, cons, eps);
    if (sol.status != LpStatus::optimal || ScalarTraits<Scalar>::sign(sol.x[j]) <= 0) continue;
    if constexpr (!ScalarTraits<Scalar>::exact) {
      if (sol.x[j] <= kWeightDust) continue;
    }
    for (std::size_t i = 0; i < s; ++i) avg[i] += sol.x[i];
    ++used;
  }
  if (used == 0) return out;
  for (auto& x : avg) x /= Scalar(static_cast<long>(used));
  auto mu = lift_measure<Scalar>(k.size(), subset, avg, 1e-6);
  const auto u = potential(k, mu);
  Scalar lo = u[subset.front()].value(), hi = lo;
  for (auto x : subset) {
    const Scalar& v = u[x].value();
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  out.constancy_defect = Scalar(hi - lo);
  out.invariant_measure = std::move(mu);
  return out;
}

#define ABSPOT_INSTANTIATE(S)                                                                                     \
  template EquilibriumResult<S> wiener_energy(const Kernel<S>&, std::span<const std::size_t>,                     \
                                              const EnergyOptions&);                                              \
  template MinimaxValue<S> minimax_q(const Kernel<S>&, std::span<const std::size_t>, double);                     \
  template MinimaxValue<S> minimax_u(const Kernel<S>&, std::span<const std::size_t>, double);                     \
  template MinimaxValue<S> minimax_v(const Kernel<S>&, std::span<const std::size_t>, double);                     \
  template MinimaxEnergies<S> minimax_energies(const Kernel<S>&, std::span<const std::size_t>, double);           \
  template FrostmanReport frostman_verify(const Kernel<S>&, std::span<const std::size_t>,                         \
                                          const DiscreteMeasure<S>&, const ExtReal<S>&, double);                  \
  template RendezvousResult<S> rendezvous(const Kernel<S>&, std::span<const std::size_t>, double);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
