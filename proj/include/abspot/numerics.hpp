#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>

#include "abspot/errors.hpp"

namespace abspot {

using Rational = mpq_class;

inline constexpr double kDirectTolerance = 1e-9;
inline constexpr double kIterativeTolerance = 1e-6;
// Finite spaces up to this size default to exact-rational arithmetic.
inline constexpr std::size_t kExactModeMaxPoints = 16;

enum class Arithmetic { exact_rational, floating };

struct ArithmeticMode {
  Arithmetic kind = Arithmetic::exact_rational;
  double tolerance = 0.0;

  static ArithmeticMode exact() { return {Arithmetic::exact_rational, 0.0}; }
  static ArithmeticMode floating(double tol = kDirectTolerance) {
    if (!(tol >= 0.0)) throw ValidationError("tolerance must be nonnegative");
    return {Arithmetic::floating, tol};
  }
  bool is_exact() const { return kind == Arithmetic::exact_rational; }
};

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational from_double(double x) { return Rational(x); }
  static int sign(const Rational& x) { return sgn(x); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static int sign(double x) { return (x > 0) - (x < 0); }
};

template <class Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

/// a <= b + tol. For exact scalars the tolerance is ignored.
template <class Scalar>
bool leq_tol(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (ScalarTraits<Scalar>::exact) {
    return a <= b;
  } else {
    return a <= b + tol;
  }
}

template <class Scalar>
bool eq_tol(const Scalar& a, const Scalar& b, double tol) {
  return leq_tol(a, b, tol) && leq_tol(b, a, tol);
}

/// Parses "3", "-2", "3/4", "0.25", "1e-3" into an exact rational. Decimal
/// literals are taken at face value (0.1 is 1/10, not its binary neighbour).
Rational parse_rational(std::string_view text);

/// "p/q" or "p" for integers.
std::string format_rational(const Rational& x);

/// Nonnegative extended real: a finite value >= 0 or +inf.
template <class Scalar>
class ExtReal {
 public:
  ExtReal() : value_(0), infinite_(false) {}
  ExtReal(const Scalar& v) : value_(v), infinite_(false) { check(); }  // NOLINT
  ExtReal(int v) : value_(v), infinite_(false) { check(); }            // NOLINT

  static ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const Scalar& value() const {
    if (infinite_) throw std::logic_error("value() on +inf");
    return value_;
  }

  double to_double() const {
    return infinite_ ? HUGE_VAL : ScalarTraits<Scalar>::to_double(value_);
  }

  ExtReal& operator+=(const ExtReal& o) {
    if (o.infinite_) infinite_ = true;
    if (!infinite_) value_ += o.value_;
    return *this;
  }
  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
  friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
    if (x.infinite_) return os << "inf";
    if constexpr (ScalarTraits<Scalar>::exact) {
      return os << format_rational(x.value_);
    } else {
      return os << x.value_;
    }
  }

 private:
  void check() {
    if constexpr (ScalarTraits<Scalar>::exact) {
      if (sgn(value_) < 0) throw ValidationError("extended real must be nonnegative");
    } else {
      if (std::isnan(value_)) throw ValidationError("extended real is NaN");
      if (std::isinf(value_)) {
        if (value_ < 0) throw ValidationError("extended real must be nonnegative");
        infinite_ = true;
        value_ = 0;
        return;
      }
      // Rounding dust from sums of nonnegative terms.
      if (value_ < 0) {
        if (value_ > -1e-12) {
          value_ = 0;
        } else {
          throw ValidationError("extended real must be nonnegative");
        }
      }
    }
  }

  Scalar value_;
  bool infinite_;
};

template <class Scalar>
ExtReal<Scalar> ext_add(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b) {
  return a + b;
}

/// c * a with 0 * inf = 0.
template <class Scalar>
ExtReal<Scalar> ext_scale(const Scalar& c, const ExtReal<Scalar>& a) {
  if (ScalarTraits<Scalar>::sign(c) < 0) throw ValidationError("scale factor must be nonnegative");
  if (ScalarTraits<Scalar>::sign(c) == 0) return ExtReal<Scalar>();
  if (a.is_infinite()) return a;
  return ExtReal<Scalar>(Scalar(c * a.value()));
}

/// a <= b + tol on extended reals; inf <= inf holds.
template <class Scalar>
bool ext_leq_tol(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b, double tol) {
  if (b.is_infinite()) return true;
  if (a.is_infinite()) return false;
  return leq_tol(a.value(), b.value(), tol);
}

template <class Scalar>
bool ext_eq_tol(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b, double tol) {
  return ext_leq_tol(a, b, tol) && ext_leq_tol(b, a, tol);
}

/// Adds a finite (possibly negative) constant; +inf stays +inf.
template <class Scalar>
ExtReal<Scalar> ext_shift(const ExtReal<Scalar>& a, const Scalar& c) {
  if (a.is_infinite()) return a;
  return ExtReal<Scalar>(Scalar(a.value() + c));
}

using ExactReal = ExtReal<Rational>;
using FloatReal = ExtReal<double>;

}  // namespace abspot
