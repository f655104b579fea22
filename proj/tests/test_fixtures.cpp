#include <doctest.h>

#include <cmath>

#include "abspot/chebyshev.hpp"
#include "abspot/energy.hpp"
#include "abspot/kernel_io.hpp"
#include "abspot/principles.hpp"
#include "helpers.hpp"

using namespace abspot;
using namespace abspot::test;

namespace {

ExactReal expected_exact(const Fixture& f, const std::string& quantity) {
  const auto* e = f.find(quantity);
  REQUIRE(e != nullptr);
  REQUIRE(std::holds_alternative<ExactReal>(e->value));
  return std::get<ExactReal>(e->value);
}

bool expected_bool(const Fixture& f, const std::string& quantity) {
  const auto* e = f.find(quantity);
  REQUIRE(e != nullptr);
  REQUIRE(std::holds_alternative<bool>(e->value));
  return std::get<bool>(e->value);
}

}  // namespace

TEST_CASE("names and errors") {
  const auto names = fixture_names();
  CHECK(names.size() == 5);
  for (const auto& n : names) {
    const auto f = fixture(n);
    CHECK(f.name == n);
    CHECK_FALSE(f.description.empty());
    CHECK_FALSE(f.expected.empty());
    for (const auto& e : f.expected) CHECK_FALSE(e.note.empty());
  }
  CHECK_THROWS_AS(fixture("nope"), ValidationError);
  CHECK_THROWS_AS(fixture("log-interval", {{}, 1}), ValidationError);
  CHECK_THROWS_AS(fixture("discrete-infty-diag", {0, {}}), ValidationError);
  CHECK(fixture("three-point").find("missing") == nullptr);
}

TEST_CASE("three-point expectations are reproduced") {
  const auto f = fixture("three-point");
  const auto k = build_kernel<Rational>(f.spec);
  CHECK(k == three_point());
  CHECK(wiener_energy(k, {}).w_value == expected_exact(f, "w"));
  CHECK(dn_exact(k, {}, 2).value == expected_exact(f, "D_2"));
  CHECK(dn_exact(k, {}, 3).value == expected_exact(f, "D_3"));
  const auto m = minimax_energies(k, {});
  CHECK(m.q.value == expected_exact(f, "q"));
  CHECK(m.u.value == expected_exact(f, "u"));
  CHECK(m.v.value == expected_exact(f, "v"));
  CHECK(m_estimate(k, {}, 4).running_sup == expected_exact(f, "M"));
  CHECK(rendezvous(k, {}).r_value == expected_exact(f, "r"));
  CHECK(max_principle_check(k).holds == expected_bool(f, "mp"));
  // D = w: the trace stays below 1 and climbs toward it.
  const auto tr = d_estimate(k, {}, 8);
  CHECK(tr.running_sup <= expected_exact(f, "D"));
  CHECK(tr.running_sup == ExactReal(q(6, 7)));
}

TEST_CASE("discrete infinite diagonal expectations are reproduced") {
  const auto f = fixture("discrete-infty-diag", {6, {}});
  const auto k = build_kernel<Rational>(f.spec);
  CHECK(k.size() == 7);
  for (std::size_t n = 2; n <= 6; ++n) CHECK(dn_exact(k, {}, n).value == expected_exact(f, "D_n"));
  for (std::size_t n = 1; n <= 5; ++n) CHECK(mn_exact(k, {}, n).value == expected_exact(f, "M"));
  CHECK(wiener_energy(k, {}).w_value == expected_exact(f, "w"));
  CHECK(max_principle_check(k).holds == expected_bool(f, "mp"));
}

TEST_CASE("geometric decay expectations are reproduced") {
  for (std::size_t n : {2, 5, 12}) {
    const auto f = fixture("geometric-decay", {n, {}});
    const auto k = build_kernel<Rational>(f.spec);
    CHECK(k.size() == n);
    CHECK(wiener_energy(k, {}).w_value == expected_exact(f, "w"));
    CHECK(dn_exact(k, {}, 2).value == expected_exact(f, "D_2"));
  }
  const auto f = fixture("geometric-decay", {12, {}});
  Rational expect(1);
  expect /= Rational(1L << 23);
  CHECK(expected_exact(f, "D_2") == ExactReal(expect));
}

TEST_CASE("modified log interval: finite w, tiny diameters") {
  const std::size_t n = 4;
  const auto f = fixture("modified-log-interval", {n, 24});
  const auto k = build_kernel<double>(f.spec);
  // 24 grid points; 1/1, 1/2, 1/3, 1/4 are grid points for m = 24.
  CHECK(k.size() == 24);
  const auto w = wiener_energy(k, {});
  CHECK(w.w_value.is_finite());
  for (std::size_t d = 2; d <= n; ++d) CHECK(dn_exact(k, {}, d).value.value() <= 0.125);
  const auto g = fixture("modified-log-interval", {5, 24});
  CHECK(build_kernel<double>(g.spec).size() == 25);
}

TEST_CASE("log interval") {
  const auto two = build_kernel<double>(fixture("log-interval", {{}, 2}).spec);
  CHECK(two(0, 0).is_infinite());
  CHECK(two(1, 1).is_infinite());
  CHECK(two(0, 1) == FloatReal(0.0));

  const auto f = fixture("log-interval", {{}, 512});
  const auto k = build_kernel<double>(f.spec);
  CHECK(wiener_energy(k, {}).w_value == FloatReal::infinity());
  const auto* e = f.find("w_continuum");
  REQUIRE(e != nullptr);
  const auto target = std::get<Approx>(e->value);
  const auto avg = build_kernel<double>(with_cell_average_diagonal(f.spec));
  const auto est = wiener_energy(avg, {}).w_value.value();
  CHECK(std::abs(est - target.target) <= target.tolerance);
}

TEST_CASE("export round trip") {
  for (const auto& n : fixture_names()) {
    if (n == "modified-log-interval" || n == "log-interval") {
      const auto spec = fixture(n, {{}, 8}).spec;
      const auto back = kernel_spec_from_json(kernel_spec_to_json(spec));
      CHECK(build_kernel<double>(back).values() == build_kernel<double>(spec).values());
    } else {
      const auto spec = fixture(n).spec;
      CHECK(build_kernel<Rational>(kernel_spec_from_json(kernel_spec_to_json(spec))) == build_kernel<Rational>(spec));
    }
  }
}
