#include "abspot/linear_program.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace abspot {

namespace {

template <class Scalar>
bool is_zero(const Scalar& x, double eps) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return sgn(x) == 0;
  } else {
    return std::abs(x) <= eps;
  }
}

template <class Scalar>
bool is_positive(const Scalar& x, double eps) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return sgn(x) > 0;
  } else {
    return x > eps;
  }
}

// Tableau: rows 0..m-1 are constraints, column `cols` holds the rhs. The
// objective row stores reduced profits (maximize), last entry = -value.
template <class Scalar>
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows + 1, std::vector<Scalar>(cols + 1)), basis_(rows) {}

  Scalar& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Scalar& rhs(std::size_t r) { return t_[r][n_]; }
  std::vector<Scalar>& objective() { return t_[m_]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c) {
    const Scalar p = t_[r][c];
    for (auto& v : t_[r]) v /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const Scalar f = t_[i][c];
      if (is_zero(f, 0.0)) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (!is_zero(t_[r][j], 0.0)) t_[i][j] -= f * t_[r][j];
      }
    }
    basis_[r] = c;
  }

  // Runs Bland's rule over columns [0, active). Returns false if unbounded.
  bool optimize(std::size_t active, double eps) {
    for (;;) {
      std::size_t enter = active;
      for (std::size_t j = 0; j < active; ++j) {
        if (is_positive(t_[m_][j], eps)) {
          enter = j;
          break;
        }
      }
      if (enter == active) return true;
      std::size_t leave = m_;
      Scalar best_ratio{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!is_positive(t_[i][enter], eps)) continue;
        Scalar ratio = t_[i][n_] / t_[i][enter];
        if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Scalar>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

template <class Scalar>
std::optional<std::vector<Scalar>> solve_square(DenseMatrix<Scalar> a, std::vector<Scalar> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw ValidationError("solve_square: dimension mismatch");
  double scale = 0.0;
  if constexpr (!ScalarTraits<Scalar>::exact) {
    for (const auto& row : a) {
      for (double v : row) scale = std::max(scale, std::abs(v));
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (ScalarTraits<Scalar>::exact) {
      for (std::size_t r = col; r < n; ++r) {
        if (sgn(a[r][col]) != 0) {
          pivot = r;
          break;
        }
      }
    } else {
      double best = 1e-12 * std::max(scale, 1.0);
      for (std::size_t r = col; r < n; ++r) {
        if (std::abs(a[r][col]) > best) {
          best = std::abs(a[r][col]);
          pivot = r;
        }
      }
    }
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(a[r][col], 0.0)) continue;
      const Scalar f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Scalar> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Scalar s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

template <class Scalar>
LpSolution<Scalar> solve_lp(const std::vector<Scalar>& objective, const std::vector<LpConstraint<Scalar>>& constraints,
                            double eps) {
  const std::size_t nvars = objective.size();
  const std::size_t m = constraints.size();

  // Column layout: structural | slack/surplus | artificial.
  std::size_t nslack = 0, nart = 0;
  std::vector<int> sign(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = constraints[i];
    if (c.coeffs.size() != nvars) throw ValidationError("solve_lp: constraint width mismatch");
    sign[i] = ScalarTraits<Scalar>::sign(c.rhs) < 0 ? -1 : 1;
    Sense s = c.sense;
    if (sign[i] < 0 && s != Sense::equal) s = s == Sense::less_equal ? Sense::greater_equal : Sense::less_equal;
    if (s != Sense::equal) ++nslack;
    if (s != Sense::less_equal) ++nart;
  }
  const std::size_t art0 = nvars + nslack;
  const std::size_t ncols = art0 + nart;
  Tableau<Scalar> tab(m, ncols);

  std::size_t slack = nvars, art = art0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = constraints[i];
    Sense s = c.sense;
    if (sign[i] < 0 && s != Sense::equal) s = s == Sense::less_equal ? Sense::greater_equal : Sense::less_equal;
    for (std::size_t j = 0; j < nvars; ++j) tab.at(i, j) = sign[i] < 0 ? Scalar(-c.coeffs[j]) : c.coeffs[j];
    tab.rhs(i) = sign[i] < 0 ? Scalar(-c.rhs) : c.rhs;
    if (s == Sense::less_equal) {
      tab.at(i, slack) = Scalar(1);
      tab.basis(i) = slack++;
    } else {
      if (s == Sense::greater_equal) tab.at(i, slack++) = Scalar(-1);
      tab.at(i, art) = Scalar(1);
      tab.basis(i) = art++;
    }
  }

  // Phase 1: maximize -(sum of artificials).
  auto& obj = tab.objective();
  for (auto& v : obj) v = Scalar(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < art0) continue;
    for (std::size_t j = 0; j <= ncols; ++j) {
      if (j < art0 || j == ncols) obj[j] += tab.at(i, j);
    }
  }
  tab.optimize(ncols, eps);
  LpSolution<Scalar> result;
  if (!is_zero(obj[ncols], eps * std::max<double>(1.0, static_cast<double>(m)))) {
    result.status = LpStatus::infeasible;
    return result;
  }
  // Drive remaining (zero-valued) artificials out of the basis.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < art0) continue;
    for (std::size_t j = 0; j < art0; ++j) {
      if (!is_zero(tab.at(i, j), eps)) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 over structural + slack columns; artificial columns are frozen.
  for (auto& v : obj) v = Scalar(0);
  for (std::size_t j = 0; j < nvars; ++j) obj[j] = objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t b = tab.basis(i);
    if (b >= nvars || b >= art0) continue;
    const Scalar f = obj[b];
    if (is_zero(f, 0.0)) continue;
    for (std::size_t j = 0; j <= ncols; ++j) obj[j] -= f * tab.at(i, j);
  }
  if (!tab.optimize(art0, eps)) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.x.assign(nvars, Scalar(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis(i) < nvars) result.x[tab.basis(i)] = tab.rhs(i);
  }
  if constexpr (!ScalarTraits<Scalar>::exact) {
    for (auto& v : result.x) {
      if (v < 0 && v > -1e3 * eps) v = 0;
    }
  }
  result.objective = Scalar(0);
  for (std::size_t j = 0; j < nvars; ++j) result.objective += objective[j] * result.x[j];
  return result;
}

template std::optional<std::vector<Rational>> solve_square(DenseMatrix<Rational>, std::vector<Rational>);
template std::optional<std::vector<double>> solve_square(DenseMatrix<double>, std::vector<double>);
template LpSolution<Rational> solve_lp(const std::vector<Rational>&, const std::vector<LpConstraint<Rational>>&,
                                       double);
template LpSolution<double> solve_lp(const std::vector<double>&, const std::vector<LpConstraint<double>>&, double);

}  // namespace abspot
