#include "abspot/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace abspot {

namespace {

MatrixEntry inf_entry() { return {true, Rational(0)}; }
MatrixEntry entry(const Rational& v) { return {false, v}; }

Rational pow2_neg(std::size_t e) {
  mpz_class den = 1;
  den <<= static_cast<mp_bitcnt_t>(e);
  return Rational(mpz_class(1), den);
}

std::size_t require(const std::optional<std::size_t>& v, std::size_t fallback, std::size_t min, const char* what) {
  const std::size_t x = v.value_or(fallback);
  if (x < min) throw ValidationError(std::string(what) + " must be >= " + std::to_string(min));
  return x;
}

KernelSpec matrix_spec(std::vector<std::string> labels, std::vector<std::vector<MatrixEntry>> rows) {
  return {LabelsSpace{std::move(labels)}, KernelDescriptor{MatrixKernel{std::move(rows)}}};
}

Fixture discrete_infty_diag(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::vector<MatrixEntry>> rows(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == j) {
        rows[i].push_back(inf_entry());
      } else {
        rows[i].push_back(entry(i != 0 && j != 0 ? 0 : 1));
      }
    }
  }
  Fixture f;
  f.name = "discrete-infty-diag";
  f.description = "points 0..N; k = inf on the diagonal, 1 between 0 and any other point, 0 otherwise";
  f.spec = matrix_spec(std::move(labels), std::move(rows));
  const std::string trunc = "truncation of the countable example with w = inf > M = 1 > D = 0";
  f.expected = {
      {"D_n", ExactReal(0), "D_n = 0 for 2 <= n <= N (distinct nonzero points); " + trunc},
      {"M", ExactReal(1), "every M_n = 1, attained with all zeros at 0"},
      {"w", ExactReal::infinity(), "every measure has an atom of infinite self-energy"},
      {"mp", true, "supports with finite blocks are single points"},
  };
  return f;
}

Fixture three_point() {
  Fixture f;
  f.name = "three-point";
  f.description = "points -1, 0, 1; k = 0 between -1 and 1, 2 otherwise";
  f.spec = matrix_spec({"-1", "0", "1"}, {{entry(2), entry(2), entry(0)},
                                          {entry(2), entry(2), entry(2)},
                                          {entry(0), entry(2), entry(2)}});
  f.expected = {
      {"w", ExactReal(1), "face enumeration: minimizer (1/2, 0, 1/2)"},
      {"D", ExactReal(1), "D = w on a finite space; D_n -> 1"},
      {"D_2", ExactReal(0), "the pair {-1, 1}"},
      {"D_3", ExactReal(Rational(2, 3)), "brute force over 3-point systems"},
      {"q", ExactReal(2), "LP; delta at 0 is optimal"},
      {"M", ExactReal(2), "M_n = 2 for every n, equal to q"},
      {"u", ExactReal(2), "LP over the whole space"},
      {"v", ExactReal(1), "v = w"},
      {"r", ExactReal(2), "invariant measure delta at 0"},
      {"mp", false, "mu = (1/2, 0, 1/2) has U(0) = 2 > 1 = V"},
  };
  return f;
}

Fixture geometric_decay(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<std::vector<MatrixEntry>> rows(n);
  for (std::size_t a = 1; a <= n; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 1; b <= n; ++b) rows[a - 1].push_back(a == b ? inf_entry() : entry(pow2_neg(a + b)));
  }
  Fixture f;
  f.name = "geometric-decay";
  f.description = "points 1..N; k(a, b) = 2^(-a-b) off the diagonal, inf on it";
  f.spec = matrix_spec(std::move(labels), std::move(rows));
  f.expected = {
      {"w", ExactReal::infinity(), "every atom has infinite self-energy"},
      {"D_2", ExactReal(pow2_neg(2 * n - 1)), "the two largest labels N-1, N"},
      {"D", Qualitative{"D = M = 0 < w = inf in the countable limit"}, "limit claim, not asserted at finite N"},
  };
  return f;
}

Fixture modified_log_interval(std::size_t n, std::size_t m) {
  // Grid j/m (j = 1..m) merged with the exceptional points 1/a (a = 1..N).
  struct Point {
    double x;
    std::size_t special;  // a for x = 1/a, else 0
  };
  std::vector<Point> pts;
  for (std::size_t j = 1; j <= m; ++j) pts.push_back({static_cast<double>(j) / static_cast<double>(m), 0});
  for (std::size_t a = 1; a <= n; ++a) {
    // 1/a sits on the grid iff a divides m.
    if (m % a == 0) {
      pts[m / a - 1].special = a;
    } else {
      pts.push_back({1.0 / static_cast<double>(a), a});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const Point& p, const Point& q) { return p.x < q.x; });

  const double h = 1.0 / static_cast<double>(m);
  const double self = -std::log(h) + 1.5;
  std::vector<std::string> labels;
  std::vector<std::vector<MatrixEntry>> rows(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::ostringstream lab;
    if (pts[i].special != 0) {
      lab << "1/" << pts[i].special;
    } else {
      lab << (static_cast<std::size_t>(std::lround(pts[i].x * static_cast<double>(m)))) << '/' << m;
    }
    labels.push_back(lab.str());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto& p = pts[i];
      const auto& q = pts[j];
      if (p.special != 0 && q.special != 0) {
        rows[i].push_back(i == j ? inf_entry() : entry(pow2_neg(p.special + q.special)));
      } else if (i == j) {
        rows[i].push_back(entry(Rational(self)));
      } else {
        rows[i].push_back(entry(Rational(-std::log(std::abs(p.x - q.x)))));
      }
    }
  }
  Fixture f;
  f.name = "modified-log-interval";
  f.description =
      "grid on (0,1] with -log|x-y|, cell-average diagonal, and exceptional points 1/a where k = 2^(-a-b) "
      "and k(1/a, 1/a) = inf";
  f.spec = matrix_spec(std::move(labels), std::move(rows));
  f.expected = {
      {"w", Qualitative{"w finite"}, "carried by the ordinary grid points"},
      {"D_n", Qualitative{"D_n <= 1/8 for 2 <= n <= N"}, "systems on the exceptional points"},
      {"M", Qualitative{"w > D = M in the continuum; a finite grid only shows the trend"}, "not asserted"},
  };
  return f;
}

Fixture log_interval(std::size_t m) {
  Fixture f;
  f.name = "log-interval";
  f.description = "-log|x-y| on the m-point grid of [0,1]";
  f.spec = {IntervalGridSpace{0.0, 1.0, m}, KernelDescriptor{LogKernel{SelfEnergy::infinite}}};
  f.expected = {
      {"w", ExactReal::infinity(), "pointwise diagonal is inf"},
      {"w_continuum", Approx{std::log(4.0), 2e-2},
       "cell-average diagonal; the continuum value is log 4 (Robin constant of [0,1]); holds for m >= 512"},
      {"fekete_3", Qualitative{"within one grid step of {0, 1/2, 1}"}, "symmetric optimum of three points"},
  };
  return f;
}

}  // namespace

const Expectation* Fixture::find(const std::string& quantity) const {
  for (const auto& e : expected) {
    if (e.quantity == quantity) return &e;
  }
  return nullptr;
}

std::vector<std::string> fixture_names() {
  return {"discrete-infty-diag", "three-point", "geometric-decay", "modified-log-interval", "log-interval"};
}

Fixture fixture(const std::string& name, const FixtureParams& params) {
  if (name == "discrete-infty-diag") return discrete_infty_diag(require(params.n, kDefaultTruncation, 1, "N"));
  if (name == "three-point") return three_point();
  if (name == "geometric-decay") return geometric_decay(require(params.n, kDefaultGeometricTruncation, 2, "N"));
  if (name == "modified-log-interval") {
    return modified_log_interval(require(params.n, kDefaultTruncation, 1, "N"),
                                 require(params.m, kDefaultModifiedLogGrid, 2, "m"));
  }
  if (name == "log-interval") return log_interval(require(params.m, kDefaultLogGrid, 2, "m"));
  std::string known;
  for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError("unknown fixture '" + name + "' (known: " + known + ")");
}

}  // namespace abspot
