#include "abspot/space_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace abspot {

IndexSet full_index_set(std::size_t n) {
  IndexSet s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

IndexSet normalize_subset(std::span<const std::size_t> subset, std::size_t n) {
  if (subset.empty()) {
    if (n == 0) throw ValidationError("empty space");
    return full_index_set(n);
  }
  IndexSet s(subset.begin(), subset.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= n) throw ValidationError("subset index " + std::to_string(s[i]) + " out of range");
    if (i > 0 && s[i] <= s[i - 1]) throw ValidationError("subset indices must be strictly increasing");
  }
  return s;
}

// ---------------------------------------------------------------------------

FiniteSpace FiniteSpace::labelled(std::vector<std::string> labels) {
  if (labels.empty()) throw ValidationError("a space needs at least one point");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw ValidationError("duplicate point label '" + l + "'");
  }
  FiniteSpace s;
  s.domain_ = Domain::abstract;
  s.size_ = labels.size();
  s.labels_ = std::move(labels);
  return s;
}

FiniteSpace FiniteSpace::interval_points(std::vector<double> coordinates, std::optional<double> spacing) {
  if (coordinates.empty()) throw ValidationError("a space needs at least one point");
  std::vector<double> sorted = coordinates;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate grid coordinate");
  }
  FiniteSpace s;
  s.domain_ = Domain::interval;
  s.size_ = coordinates.size();
  s.coordinates_ = std::move(coordinates);
  s.spacing_ = spacing;
  return s;
}

FiniteSpace FiniteSpace::circle_points(std::vector<double> angles, CircleMetric metric,
                                       std::optional<double> spacing) {
  if (angles.empty()) throw ValidationError("a space needs at least one point");
  std::vector<double> sorted = angles;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate circle angle");
  }
  FiniteSpace s;
  s.domain_ = Domain::circle;
  s.metric_ = metric;
  s.size_ = angles.size();
  s.coordinates_ = std::move(angles);
  s.spacing_ = spacing;
  return s;
}

std::string FiniteSpace::describe(std::size_t i) const {
  if (i >= size_) throw ValidationError("point index out of range");
  if (domain_ == Domain::abstract) return labels_[i];
  std::ostringstream os;
  os.precision(17);
  os << coordinates_[i];
  return os.str();
}

double FiniteSpace::coordinate(std::size_t i) const {
  if (domain_ == Domain::abstract) throw ValidationError("abstract points have no coordinate");
  return coordinates_.at(i);
}

double FiniteSpace::distance(std::size_t i, std::size_t j) const {
  const double d = std::abs(coordinate(i) - coordinate(j));
  if (domain_ == Domain::interval) return d;
  const double arc = std::min(d, 2.0 * std::numbers::pi - d);
  if (metric_ == CircleMetric::arc) return arc;
  return 2.0 * std::sin(arc / 2.0);
}

FiniteSpace FiniteSpace::subspace(std::span<const std::size_t> indices) const {
  const IndexSet idx = normalize_subset(indices, size_);
  FiniteSpace s;
  s.domain_ = domain_;
  s.metric_ = metric_;
  s.size_ = idx.size();
  for (auto i : idx) {
    if (domain_ == Domain::abstract) {
      s.labels_.push_back(labels_[i]);
    } else {
      s.coordinates_.push_back(coordinates_[i]);
    }
  }
  if (idx.size() == size_) s.spacing_ = spacing_;
  return s;
}

FiniteSpace grid_discretize(const GridDomain& domain, std::size_t m) {
  if (m < 2) throw ValidationError("a grid needs m >= 2 points");
  if (const auto* iv = std::get_if<IntervalDomain>(&domain)) {
    if (!(iv->b > iv->a)) throw ValidationError("interval needs a < b");
    std::vector<double> x(m);
    const double step = (iv->b - iv->a) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = iv->a + (iv->b - iv->a) * static_cast<double>(i) / static_cast<double>(m - 1);
    }
    x.back() = iv->b;
    return FiniteSpace::interval_points(std::move(x), step);
  }
  const auto& circle = std::get<CircleDomain>(domain);
  std::vector<double> theta(m);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    theta[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
  }
  return FiniteSpace::circle_points(std::move(theta), circle.metric, step);
}

// ---------------------------------------------------------------------------

template <class Scalar>
Kernel<Scalar>::Kernel(FiniteSpace space, std::vector<Value> values)
    : space_(std::move(space)), values_(std::move(values)) {
  const std::size_t n = space_.size();
  if (values_.size() != n * n) {
    throw ValidationError("kernel matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (values_[i * n + j] != values_[j * n + i]) {
        throw ValidationError("kernel is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) +
                              ")");
      }
    }
  }
}

template <class Scalar>
Kernel<Scalar> Kernel<Scalar>::from_rows(FiniteSpace space, const std::vector<std::vector<Value>>& rows) {
  const std::size_t n = space.size();
  if (rows.size() != n) throw ValidationError("matrix must have one row per point");
  std::vector<Value> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw ValidationError("matrix rows must have n entries");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Kernel(std::move(space), std::move(flat));
}

template <class Scalar>
bool Kernel<Scalar>::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](const Value& v) { return v.is_finite(); });
}

template <class Scalar>
bool Kernel<Scalar>::is_finite_on(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  for (auto i : rows) {
    for (auto j : cols) {
      if ((*this)(i, j).is_infinite()) return false;
    }
  }
  return true;
}

template <class Scalar>
std::optional<Scalar> Kernel<Scalar>::min_finite_entry() const {
  std::optional<Scalar> best;
  for (const auto& v : values_) {
    if (v.is_finite() && (!best || v.value() < *best)) best = v.value();
  }
  return best;
}

template <class Scalar>
Restriction<Scalar> restrict_kernel(const Kernel<Scalar>& k, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("restriction to an empty subset");
  IndexSet idx = normalize_subset(subset, k.size());
  std::vector<ExtReal<Scalar>> values;
  values.reserve(idx.size() * idx.size());
  for (auto i : idx) {
    for (auto j : idx) values.push_back(k(i, j));
  }
  return {Kernel<Scalar>(k.space().subspace(idx), std::move(values)), std::move(idx)};
}

template <class Scalar>
Kernel<Scalar> shift_kernel(const Kernel<Scalar>& k, const Scalar& c) {
  std::vector<ExtReal<Scalar>> values;
  values.reserve(k.values().size());
  const auto n = k.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = k(i, j);
      if (v.is_infinite()) {
        values.push_back(v);
        continue;
      }
      Scalar shifted = v.value() + c;
      if (ScalarTraits<Scalar>::sign(shifted) < 0) {
        throw ValidationError("shift makes entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") negative");
      }
      values.emplace_back(shifted);
    }
  }
  return Kernel<Scalar>(k.space(), std::move(values));
}

Kernel<double> to_floating(const Kernel<Rational>& k) {
  std::vector<FloatReal> values;
  values.reserve(k.values().size());
  for (const auto& v : k.values()) {
    values.push_back(v.is_infinite() ? FloatReal::infinity() : FloatReal(v.value().get_d()));
  }
  return Kernel<double>(k.space(), std::move(values));
}

// ---------------------------------------------------------------------------

FiniteSpace build_space(const SpaceSpec& spec) {
  return std::visit(
      [](const auto& s) -> FiniteSpace {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LabelsSpace>) {
          return FiniteSpace::labelled(s.labels);
        } else if constexpr (std::is_same_v<T, IntervalGridSpace>) {
          return grid_discretize(IntervalDomain{s.a, s.b}, s.m);
        } else {
          return grid_discretize(CircleDomain{s.metric}, s.m);
        }
      },
      spec);
}

namespace {

// Signed intermediate entry: closed forms and shifts may pass through
// negative values before validation.
template <class Scalar>
struct RawEntry {
  bool infinite = false;
  Scalar value{};
};

template <class Scalar>
using RawMatrix = std::vector<RawEntry<Scalar>>;

double cell_self_energy_log(double h) { return -std::log(h) + 1.5; }

double cell_self_energy_riesz(double h, double s) {
  if (s >= 1.0) return HUGE_VAL;
  return 2.0 * std::pow(h, -s) / ((1.0 - s) * (2.0 - s));
}

template <class Scalar>
RawEntry<Scalar> from_double(double x) {
  if (std::isinf(x)) return {true, Scalar(0)};
  return {false, ScalarTraits<Scalar>::from_double(x)};
}

template <class Scalar>
RawMatrix<Scalar> evaluate(const KernelDescriptor& desc, const FiniteSpace& space) {
  const std::size_t n = space.size();
  RawMatrix<Scalar> raw(n * n);
  auto closed_form = [&](auto&& f, SelfEnergy diag, double cell_value) {
    if (space.domain() == Domain::abstract) {
      throw ValidationError("closed-form kernels need a grid space");
    }
    if (diag == SelfEnergy::cell_average && !space.spacing()) {
      throw ValidationError("cell-average diagonal needs a uniform grid");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        RawEntry<Scalar> e;
        if (i == j) {
          e = diag == SelfEnergy::infinite ? RawEntry<Scalar>{true, Scalar(0)} : from_double<Scalar>(cell_value);
        } else {
          e = from_double<Scalar>(f(space.distance(i, j)));
        }
        raw[i * n + j] = e;
        raw[j * n + i] = e;
      }
    }
  };

  std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, MatrixKernel>) {
          if (form.rows.size() != n) {
            throw ValidationError("matrix has " + std::to_string(form.rows.size()) + " rows, space has " +
                                  std::to_string(n) + " points");
          }
          for (std::size_t i = 0; i < n; ++i) {
            if (form.rows[i].size() != n) {
              throw ValidationError("matrix row " + std::to_string(i) + " must have " + std::to_string(n) +
                                    " entries");
            }
            for (std::size_t j = 0; j < n; ++j) {
              const auto& e = form.rows[i][j];
              if (e.infinite) {
                raw[i * n + j] = {true, Scalar(0)};
              } else if constexpr (ScalarTraits<Scalar>::exact) {
                raw[i * n + j] = {false, e.value};
              } else {
                raw[i * n + j] = {false, e.value.get_d()};
              }
            }
          }
        } else if constexpr (std::is_same_v<T, LogKernel>) {
          const double h = space.spacing().value_or(0.0);
          closed_form([](double d) { return -std::log(d); }, form.diagonal,
                      form.diagonal == SelfEnergy::cell_average ? cell_self_energy_log(h) : 0.0);
        } else if constexpr (std::is_same_v<T, RieszKernel>) {
          if (!(form.s > 0.0)) throw ValidationError("riesz exponent s must be positive");
          const double h = space.spacing().value_or(0.0);
          const double s = form.s;
          closed_form([s](double d) { return std::pow(d, -s); }, form.diagonal,
                      form.diagonal == SelfEnergy::cell_average ? cell_self_energy_riesz(h, s) : 0.0);
        } else {
          if (!form.base) throw ValidationError("shifted kernel without base");
          raw = evaluate<Scalar>(*form.base, space);
          Scalar c;
          if constexpr (ScalarTraits<Scalar>::exact) {
            c = form.c;
          } else {
            c = form.c.get_d();
          }
          for (auto& e : raw) {
            if (!e.infinite) e.value += c;
          }
        }
      },
      desc.form);
  return raw;
}

bool is_log(const KernelDescriptor& d) { return std::holds_alternative<LogKernel>(d.form); }

}  // namespace

template <class Scalar>
Kernel<Scalar> build_kernel(const KernelSpec& spec) {
  FiniteSpace space = build_space(spec.space);
  const RawMatrix<Scalar> raw = evaluate<Scalar>(spec.kernel, space);
  const std::size_t n = space.size();

  std::optional<Scalar> most_negative;
  std::size_t bad_i = 0, bad_j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& e = raw[i * n + j];
      if (e.infinite || ScalarTraits<Scalar>::sign(e.value) >= 0) continue;
      if (!most_negative || e.value < *most_negative) {
        most_negative = e.value;
        bad_i = i;
        bad_j = j;
      }
    }
  }
  if (most_negative) {
    std::ostringstream msg;
    msg.precision(17);
    if (is_log(spec.kernel)) {
      msg << "log kernel is negative on a domain of diameter > 1";
    } else {
      msg << "negative kernel entry";
    }
    msg << " at (" << bad_i << "," << bad_j << "); wrap the kernel in an explicit shift with c >= "
        << to_double(Scalar(-*most_negative));
    throw ValidationError(msg.str());
  }

  std::vector<ExtReal<Scalar>> values;
  values.reserve(n * n);
  for (const auto& e : raw) {
    values.push_back(e.infinite ? ExtReal<Scalar>::infinity() : ExtReal<Scalar>(e.value));
  }
  return Kernel<Scalar>(std::move(space), std::move(values));
}

bool has_infinite_grid_diagonal(const KernelSpec& spec) {
  if (std::holds_alternative<LabelsSpace>(spec.space)) return false;
  const KernelDescriptor* d = &spec.kernel;
  while (const auto* s = std::get_if<ShiftedKernel>(&d->form)) {
    if (!s->base) return false;
    d = s->base.get();
  }
  if (const auto* l = std::get_if<LogKernel>(&d->form)) return l->diagonal == SelfEnergy::infinite;
  if (const auto* r = std::get_if<RieszKernel>(&d->form)) return r->diagonal == SelfEnergy::infinite;
  return false;
}

namespace {

KernelDescriptor cell_average(const KernelDescriptor& d) {
  return std::visit(
      [](const auto& form) -> KernelDescriptor {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, LogKernel> || std::is_same_v<T, RieszKernel>) {
          T copy = form;
          copy.diagonal = SelfEnergy::cell_average;
          return {copy};
        } else if constexpr (std::is_same_v<T, ShiftedKernel>) {
          return {ShiftedKernel{form.c, std::make_shared<const KernelDescriptor>(cell_average(*form.base))}};
        } else {
          return {form};
        }
      },
      d.form);
}

}  // namespace

KernelSpec with_cell_average_diagonal(const KernelSpec& spec) { return {spec.space, cell_average(spec.kernel)}; }

KernelSpec shifted_spec(const KernelSpec& spec, const Rational& c) {
  return {spec.space, {ShiftedKernel{c, std::make_shared<const KernelDescriptor>(spec.kernel)}}};
}

template class Kernel<Rational>;
template class Kernel<double>;
template Restriction<Rational> restrict_kernel(const Kernel<Rational>&, std::span<const std::size_t>);
template Restriction<double> restrict_kernel(const Kernel<double>&, std::span<const std::size_t>);
template Kernel<Rational> shift_kernel(const Kernel<Rational>&, const Rational&);
template Kernel<double> shift_kernel(const Kernel<double>&, const double&);
template Kernel<Rational> build_kernel<Rational>(const KernelSpec&);
template Kernel<double> build_kernel<double>(const KernelSpec&);

}  // namespace abspot
