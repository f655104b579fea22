#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "abspot/diameter.hpp"
#include "abspot/energy.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace abspot;
using namespace abspot::test;

TEST_CASE("multiset counts") {
  CHECK(multiset_count(3, 3) == 10);
  CHECK(multiset_count(1, 7) == 1);
  CHECK(multiset_count(0, 2) == 0);
  CHECK(multiset_count(2048, 3) == 1'433'753'600ULL);
  CHECK(multiset_count(100000, 40) == UINT64_MAX);
}

TEST_CASE("three-point D_n") {
  const auto k = three_point();
  const auto d2 = dn_exact(k, {}, 2);
  CHECK(d2.value == ExactReal(0));
  CHECK(d2.indices == std::vector<std::size_t>{0, 2});
  const auto d3 = dn_exact(k, {}, 3);
  CHECK(d3.value == ExactReal(q(2, 3)));
  CHECK(d3.indices == std::vector<std::size_t>{0, 0, 2});
  CHECK(average_pair_value(k, std::span<const std::size_t>(d3.indices)) == d3.value);
  CHECK(dn_exact(k, {}, 6).value == ExactReal(q(4, 5)));
  for (std::size_t n = 2; n <= 6; ++n) CHECK(dn_exact(k, {}, n).value == oracle::dn(k, full_index_set(3), n));
}

TEST_CASE("heuristic reaches 4/5 at n = 6 for every seed") {
  const auto k = three_point();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = fekete_heuristic(k, {}, 6, 4, seed);
    CHECK(h.value == ExactReal(q(4, 5)));
    CHECK(h.status == BoundStatus::heuristic_upper_bound);
  }
}

TEST_CASE("single point and constant kernels") {
  const auto one = constant_kernel(1, q(5, 2));
  for (std::size_t n = 2; n <= 5; ++n) CHECK(dn_exact(one, {}, n).value == ExactReal(q(5, 2)));
  const auto c = constant_kernel(4, q(3));
  const auto tr = d_estimate(c, {}, 6);
  for (const auto& e : tr.sequence) CHECK(e.value == ExactReal(3));
}

TEST_CASE("discrete infinite diagonal") {
  const auto k5 = build_kernel<Rational>(fixture("discrete-infty-diag", {5, {}}).spec);
  const auto d3 = dn_exact(k5, {}, 3);
  CHECK(d3.value == ExactReal(0));
  CHECK(d3.indices == std::vector<std::size_t>{1, 2, 3});
  const auto k10 = build_kernel<Rational>(fixture("discrete-infty-diag", {10, {}}).spec);
  const auto tr = d_estimate(k10, {}, 10);
  for (const auto& e : tr.sequence) {
    CHECK(e.status == BoundStatus::exact);
    CHECK(e.value == ExactReal(0));
  }
  // More points than distinct nonzero labels forces an infinite pair or a pair with 0.
  const auto k2 = build_kernel<Rational>(fixture("discrete-infty-diag", {2, {}}).spec);
  CHECK(dn_exact(k2, {}, 3).value == ExactReal(q(2, 3)));
  CHECK(dn_exact(k2, {}, 4).value.is_infinite());
}

TEST_CASE("budget") {
  std::mt19937_64 rng(1);
  const auto k = random_kernel(rng, 10);
  CHECK_THROWS_AS(dn_exact(k, {}, 8, 1000), BudgetExceeded);
  TraceOptions o;
  o.budget = 1000;
  o.allow_heuristic = false;
  CHECK_THROWS_AS(d_estimate(k, {}, 8, o), BudgetExceeded);
  o.allow_heuristic = true;
  const auto tr = d_estimate(k, {}, 8, o);
  CHECK(tr.sequence.back().status == BoundStatus::heuristic_upper_bound);
  CHECK_THROWS_AS(dn_exact(k, {}, 1), ValidationError);
}

TEST_CASE("log grid Fekete points") {
  const auto k = build_kernel<double>({IntervalGridSpace{0.0, 1.0, 257}, KernelDescriptor{LogKernel{}}});
  const auto h2 = fekete_heuristic(k, {}, 2);
  CHECK(h2.indices == std::vector<std::size_t>{0, 256});
  CHECK(h2.value.value() == doctest::Approx(0.0));
  const auto h3 = fekete_heuristic(k, {}, 3);
  REQUIRE(h3.indices.size() == 3);
  CHECK(h3.indices[0] == 0);
  CHECK(h3.indices[1] >= 127);
  CHECK(h3.indices[1] <= 129);
  CHECK(h3.indices[2] == 256);
  CHECK(h3.value.value() == doctest::Approx(2.0 / 3.0 * std::log(2.0)).epsilon(1e-3));

  // Exact cross-check on a coarse grid.
  const auto c = build_kernel<double>({IntervalGridSpace{0.0, 1.0, 17}, KernelDescriptor{LogKernel{}}});
  const auto ex = dn_exact(c, {}, 3);
  CHECK(ex.indices == std::vector<std::size_t>{0, 8, 16});
  CHECK(fekete_heuristic(c, {}, 3).value.value() == doctest::Approx(ex.value.value()));
}

TEST_CASE("random kernels: oracle agreement, monotonicity, set monotonicity, heuristic bound") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 60; ++it) {
    const std::size_t s = 2 + static_cast<std::size_t>(it % 3);
    const auto k = it % 4 == 0 ? random_kernel_with_inf(rng, s, 0.3) : random_kernel(rng, s);
    const auto all = full_index_set(s);
    ExactReal prev;
    for (std::size_t n = 2; n <= 5; ++n) {
      const auto e = dn_exact(k, {}, n);
      CHECK(e.value == oracle::dn(k, all, n));
      if (n > 2) CHECK(prev <= e.value);
      prev = e.value;
      CHECK(e.value <= fekete_heuristic(k, {}, n, 2, static_cast<std::uint64_t>(it)).value);
      const IndexSet sub(all.begin(), all.end() - 1);
      CHECK(e.value <= dn_exact(k, sub, n).value);
    }
  }
}

TEST_CASE("w of a multiset's support is at most its empirical energy") {
  // (1/n^2) sum over all ordered pairs, diagonal included; without the
  // diagonal terms the bound fails, e.g. for [[10,0],[0,10]].
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (int it = 0; it < 50; ++it) {
    const auto k = random_kernel(rng, 4);
    std::vector<std::size_t> w(5);
    for (auto& x : w) x = pick(rng);
    Rational sum(0);
    for (auto a : w) {
      for (auto b : w) sum += k(a, b).value();
    }
    IndexSet support(w.begin(), w.end());
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    CHECK(wiener_energy(k, support).w_value <= ExactReal(Rational(sum / 25)));
  }
  const auto diag = matrix({{"10", "0"}, {"0", "10"}});
  CHECK(wiener_energy(diag, {}).w_value == ExactReal(5));
}
