#pragma once

#include <optional>
#include <vector>

#include "abspot/numerics.hpp"

namespace abspot {

template <class Scalar>
using DenseMatrix = std::vector<std::vector<Scalar>>;

/// Solves A x = b by Gaussian elimination. Returns nullopt when A is
/// singular (exactly, or below a relative pivot threshold in floating mode).
template <class Scalar>
std::optional<std::vector<Scalar>> solve_square(DenseMatrix<Scalar> a, std::vector<Scalar> b);

enum class Sense { less_equal, equal, greater_equal };

template <class Scalar>
struct LpConstraint {
  std::vector<Scalar> coeffs;
  Sense sense = Sense::less_equal;
  Scalar rhs{};
};

enum class LpStatus { optimal, infeasible, unbounded };

template <class Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Scalar objective{};
  std::vector<Scalar> x;
};

/// maximize c.x subject to the constraints and x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule, so it terminates on
/// degenerate problems and returns the same vertex for the same input. With
/// Scalar = Rational every step is exact; with double, `eps` guards pivots
/// and reduced costs.
template <class Scalar>
LpSolution<Scalar> solve_lp(const std::vector<Scalar>& objective, const std::vector<LpConstraint<Scalar>>& constraints,
                            double eps = 1e-11);

}  // namespace abspot
