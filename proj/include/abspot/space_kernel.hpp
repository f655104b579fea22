#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "abspot/numerics.hpp"

namespace abspot {

using IndexSet = std::vector<std::size_t>;

/// {0, 1, ..., n-1}
IndexSet full_index_set(std::size_t n);

/// Checks that `subset` is nonempty, strictly increasing and inside [0, n).
/// An empty span means "every point".
IndexSet normalize_subset(std::span<const std::size_t> subset, std::size_t n);

enum class Domain { abstract, interval, circle };
enum class CircleMetric { chordal, arc };

// Grids live on the unit circle (radius 1) or on a closed interval [a, b].
struct IntervalDomain {
  double a = 0.0;
  double b = 1.0;
};
struct CircleDomain {
  CircleMetric metric = CircleMetric::chordal;
};
using GridDomain = std::variant<IntervalDomain, CircleDomain>;

/// Ordered finite point set. Points are either opaque labels or coordinates
/// on a 1-D domain (interval position or circle angle).
class FiniteSpace {
 public:
  static FiniteSpace labelled(std::vector<std::string> labels);
  static FiniteSpace interval_points(std::vector<double> coordinates, std::optional<double> spacing = {});
  static FiniteSpace circle_points(std::vector<double> angles, CircleMetric metric,
                                   std::optional<double> spacing = {});

  std::size_t size() const { return size_; }
  Domain domain() const { return domain_; }
  CircleMetric metric() const { return metric_; }
  /// Uniform step for unrestricted grids (arc length on the circle).
  std::optional<double> spacing() const { return spacing_; }

  std::string describe(std::size_t i) const;
  double coordinate(std::size_t i) const;
  double distance(std::size_t i, std::size_t j) const;
  FiniteSpace subspace(std::span<const std::size_t> indices) const;

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  FiniteSpace() = default;

  Domain domain_ = Domain::abstract;
  CircleMetric metric_ = CircleMetric::chordal;
  std::size_t size_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> coordinates_;
  std::optional<double> spacing_;
};

/// Equally spaced points: both endpoints for intervals, m angles 2*pi*i/m for
/// the circle.
FiniteSpace grid_discretize(const GridDomain& domain, std::size_t m);

/// Symmetric nonnegative extended-real matrix on a finite space.
template <class Scalar>
class Kernel {
 public:
  using Value = ExtReal<Scalar>;

  /// Row-major n*n values; throws ValidationError on asymmetry.
  Kernel(FiniteSpace space, std::vector<Value> values);

  static Kernel from_rows(FiniteSpace space, const std::vector<std::vector<Value>>& rows);

  std::size_t size() const { return space_.size(); }
  const FiniteSpace& space() const { return space_; }
  const Value& operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  const std::vector<Value>& values() const { return values_; }

  bool is_finite() const;
  bool is_finite_on(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;
  std::optional<Scalar> min_finite_entry() const;

  friend bool operator==(const Kernel& a, const Kernel& b) {
    return a.space_ == b.space_ && a.values_ == b.values_;
  }

 private:
  FiniteSpace space_;
  std::vector<Value> values_;
};

template <class Scalar>
struct Restriction {
  Kernel<Scalar> kernel;
  /// parent_index[i] is the parent-space index of restricted point i.
  IndexSet parent_index;
};

/// Principal submatrix on `subset` (indices into the parent space).
template <class Scalar>
Restriction<Scalar> restrict_kernel(const Kernel<Scalar>& k, std::span<const std::size_t> subset);

/// Adds c to every finite entry. Rejects shifts that would make an entry negative.
template <class Scalar>
Kernel<Scalar> shift_kernel(const Kernel<Scalar>& k, const Scalar& c);

Kernel<double> to_floating(const Kernel<Rational>& k);

// ---------------------------------------------------------------------------
// Kernel specifications (the JSON spec file maps 1:1 onto these).

struct LabelsSpace {
  std::vector<std::string> labels;
};
struct IntervalGridSpace {
  double a = 0.0;
  double b = 1.0;
  std::size_t m = 2;
};
struct CircleGridSpace {
  std::size_t m = 2;
  CircleMetric metric = CircleMetric::chordal;
};
using SpaceSpec = std::variant<LabelsSpace, IntervalGridSpace, CircleGridSpace>;

/// Diagonal of a closed-form kernel: +inf (the pointwise value) or the mean
/// self-interaction of a grid cell of width h.
enum class SelfEnergy { infinite, cell_average };

struct MatrixEntry {
  bool infinite = false;
  Rational value;
};
struct MatrixKernel {
  std::vector<std::vector<MatrixEntry>> rows;
};
/// k(x, y) = -log|x - y|
struct LogKernel {
  SelfEnergy diagonal = SelfEnergy::infinite;
};
/// k(x, y) = |x - y|^(-s)
struct RieszKernel {
  double s = 1.0;
  SelfEnergy diagonal = SelfEnergy::infinite;
};
struct KernelDescriptor;
struct ShiftedKernel {
  Rational c;
  std::shared_ptr<const KernelDescriptor> base;
};
struct KernelDescriptor {
  std::variant<MatrixKernel, LogKernel, RieszKernel, ShiftedKernel> form;
};

struct KernelSpec {
  SpaceSpec space;
  KernelDescriptor kernel;
};

FiniteSpace build_space(const SpaceSpec& spec);

/// Evaluates and validates a spec. Negative entries are rejected with a hint
/// to wrap the kernel in an explicit shift.
template <class Scalar>
Kernel<Scalar> build_kernel(const KernelSpec& spec);

/// True for grid spaces with a closed-form kernel whose diagonal is +inf.
bool has_infinite_grid_diagonal(const KernelSpec& spec);

/// Same kernel with every closed-form diagonal switched to the cell average.
KernelSpec with_cell_average_diagonal(const KernelSpec& spec);

KernelSpec shifted_spec(const KernelSpec& spec, const Rational& c);

}  // namespace abspot
