#include <doctest.h>

#include <cmath>

#include "abspot/chebyshev.hpp"
#include "abspot/energy.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace abspot;
using namespace abspot::test;

TEST_CASE("three-point M_n") {
  const auto k = three_point();
  const auto m1 = mn_exact(k, {}, 1);
  CHECK(m1.value == ExactReal(2));
  CHECK(m1.zeros == std::vector<std::size_t>{1});
  for (std::size_t n = 1; n <= 4; ++n) CHECK(mn_exact(k, {}, n).value == ExactReal(2));
  const auto tr = m_estimate(k, {}, 4);
  CHECK(tr.running_sup == ExactReal(2));
  REQUIRE(tr.q_reference);
  CHECK(*tr.q_reference == ExactReal(2));
}

TEST_CASE("log-polynomial infimum") {
  const auto k = three_point();
  const std::vector<std::size_t> ends{0, 2};
  CHECK(logpoly_inf(k, std::span<const std::size_t>(ends), std::span<const std::size_t>()) == ExactReal(1));
  const std::vector<std::size_t> mid{1};
  CHECK(logpoly_inf(k, std::span<const std::size_t>(mid), std::span<const std::size_t>()) == ExactReal(2));

  const auto d = build_kernel<Rational>(fixture("discrete-infty-diag", {5, {}}).spec);
  const std::vector<std::size_t> at_zero{0, 0, 0};
  CHECK(logpoly_inf(d, std::span<const std::size_t>(at_zero), std::span<const std::size_t>()) == ExactReal(1));
}

TEST_CASE("LogPolynomial") {
  const LogPolynomial a({0, 2});
  const LogPolynomial b({1});
  const auto c = a + b;
  CHECK(c.degree() == 3);
  const auto k = three_point();
  for (std::size_t x = 0; x < 3; ++x) CHECK(c(k, x) == a(k, x) + b(k, x));
  CHECK(a(k, 1) == ExactReal(4));
}

TEST_CASE("discrete infinite diagonal: M_n = 1") {
  const auto k7 = build_kernel<Rational>(fixture("discrete-infty-diag", {7, {}}).spec);
  CHECK(mn_exact(k7, {}, 3).value == ExactReal(1));
  const auto k5 = build_kernel<Rational>(fixture("discrete-infty-diag", {5, {}}).spec);
  const auto tr = m_estimate(k5, {}, 5);
  for (const auto& e : tr.sequence) {
    CHECK(e.status == BoundStatus::exact);
    CHECK(e.value == ExactReal(1));
  }
  CHECK(tr.running_sup == ExactReal(1));
}

TEST_CASE("constant kernel") {
  const auto k = constant_kernel(4, q(9, 4));
  for (std::size_t n = 1; n <= 4; ++n) CHECK(mn_exact(k, {}, n).value == ExactReal(q(9, 4)));
}

TEST_CASE("heuristic is a lower bound") {
  const auto k = three_point();
  const auto h = mn_heuristic(k, {}, 2);
  CHECK(h.value == ExactReal(2));
  CHECK(h.status == BoundStatus::heuristic_lower_bound);

  const auto g = build_kernel<double>({IntervalGridSpace{0.0, 1.0, 65}, KernelDescriptor{LogKernel{}}});
  const auto ex = mn_exact(g, {}, 2);
  const auto gh = mn_heuristic(g, {}, 2, 4, 7);
  CHECK(gh.value <= ex.value);
  CHECK(gh.value.value() == doctest::Approx(ex.value.value()).epsilon(1e-2));
}

TEST_CASE("budget") {
  std::mt19937_64 rng(2);
  const auto k = random_kernel(rng, 10);
  CHECK_THROWS_AS(mn_exact(k, {}, 8, 1000), BudgetExceeded);
  ChebyshevTraceOptions o;
  o.budget = 1000;
  o.allow_heuristic = false;
  CHECK_THROWS_AS(m_estimate(k, {}, 8, o), BudgetExceeded);
  o.allow_heuristic = true;
  const auto tr = m_estimate(k, {}, 8, o);
  CHECK(tr.sequence.back().status == BoundStatus::heuristic_lower_bound);
  CHECK_THROWS_AS(mn_exact(k, {}, 0), ValidationError);
}

TEST_CASE("random kernels: oracle, superadditivity, M_n <= q, D_n <= M_n") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 60; ++it) {
    const std::size_t s = 2 + static_cast<std::size_t>(it % 3);
    const auto k = random_kernel(rng, s);
    const auto all = full_index_set(s);
    const auto qv = minimax_q(k, {}).value;
    std::vector<ExactReal> m(6);
    for (std::size_t n = 1; n <= 5; ++n) {
      m[n] = mn_exact(k, {}, n).value;
      CHECK(m[n] == oracle::mn(k, all, n));
      CHECK(m[n] <= qv);
      CHECK(mn_heuristic(k, {}, n, 2, static_cast<std::uint64_t>(it)).value <= m[n]);
      if (n >= 2) CHECK(dn_exact(k, {}, n).value <= m[n]);
    }
    // (a+b) M_{a+b} >= a M_a + b M_b
    for (std::size_t a = 1; a <= 4; ++a) {
      for (std::size_t b = 1; a + b <= 5; ++b) {
        const Rational lhs = Rational(static_cast<long>(a + b)) * m[a + b].value();
        const Rational rhs = Rational(static_cast<long>(a)) * m[a].value() + Rational(static_cast<long>(b)) * m[b].value();
        CHECK(lhs >= rhs);
      }
    }
  }
}
