#include <doctest.h>

#include <algorithm>

#include "abspot/diameter.hpp"
#include "abspot/energy.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace abspot;
using namespace abspot::test;

namespace {

DiscreteMeasure<Rational> measure(std::vector<Rational> w) { return DiscreteMeasure<Rational>(std::move(w)); }

}  // namespace

TEST_CASE("three-point energy") {
  const auto k = three_point();
  const auto r = wiener_energy(k, {});
  CHECK(r.w_value == ExactReal(1));
  REQUIRE(r.minimizer);
  CHECK(r.minimizer->weights() == std::vector<Rational>{q(1, 2), q(0), q(1, 2)});
  CHECK(r.certification == Certification::exact_rational);
  CHECK(energy(k, *r.minimizer) == r.w_value);
}

TEST_CASE("identity kernel") {
  const auto k = matrix({{"1", "0"}, {"0", "1"}});
  const auto r = wiener_energy(k, {});
  CHECK(r.w_value == ExactReal(q(1, 2)));
  CHECK(r.minimizer->weights() == std::vector<Rational>{q(1, 2), q(1, 2)});
}

TEST_CASE("all-infinite diagonal gives w = inf without a minimizer") {
  const auto k = build_kernel<Rational>(fixture("discrete-infty-diag", {6, {}}).spec);
  const auto r = wiener_energy(k, {});
  CHECK(r.w_value.is_infinite());
  CHECK_FALSE(r.minimizer);
  CHECK(r.certification == Certification::exact_rational);
  const auto g = build_kernel<Rational>(fixture("geometric-decay", {5, {}}).spec);
  CHECK(wiener_energy(g, {}).w_value.is_infinite());
}

TEST_CASE("mixed diagonal: the finite points carry the measure") {
  const auto k = matrix({{"inf", "1"}, {"1", "3"}});
  const auto r = wiener_energy(k, {});
  CHECK(r.w_value == ExactReal(3));
  CHECK(r.minimizer->weights() == std::vector<Rational>{q(0), q(1)});
}

TEST_CASE("minimax energies") {
  const auto k = three_point();
  const auto m = minimax_energies(k, {});
  CHECK(m.q.value == ExactReal(2));
  CHECK(m.u.value == ExactReal(2));
  CHECK(m.v.value == ExactReal(1));
  REQUIRE(m.v.witness);
  CHECK(sup_potential(k, *m.v.witness, Over::support_only) == ExactReal(1));

  const auto two = matrix({{"2", "1"}, {"1", "3"}});
  const auto q2 = minimax_q(two, {});
  CHECK(q2.value == ExactReal(q(5, 3)));
  CHECK(q2.witness->weights() == std::vector<Rational>{q(2, 3), q(1, 3)});
  CHECK(wiener_energy(two, {}).w_value == ExactReal(q(5, 3)));

  const auto c = constant_kernel(3, q(7, 2));
  const auto mc = minimax_energies(c, {});
  CHECK(mc.u.value == ExactReal(q(7, 2)));
  CHECK(mc.v.value == ExactReal(q(7, 2)));
  CHECK(mc.q.value == ExactReal(q(7, 2)));
}

TEST_CASE("u ranges over the whole space, q only over the subset") {
  const auto k = three_point();
  const IndexSet ends{0, 2};
  CHECK(minimax_q(k, ends).value == ExactReal(1));
  CHECK(minimax_u(k, ends).value == ExactReal(2));
  const auto inf = matrix({{"inf", "inf"}, {"inf", "inf"}});
  CHECK(minimax_q(inf, {}).value.is_infinite());
  CHECK(minimax_v(inf, {}).value.is_infinite());
}

TEST_CASE("Frostman conditions") {
  const auto k = three_point();
  const auto ok = frostman_verify(k, {}, measure({q(1, 2), q(0), q(1, 2)}), ExactReal(1));
  CHECK(ok.all_ok());
  const auto bad = frostman_verify(k, {}, DiscreteMeasure<Rational>::uniform(3), ExactReal(1));
  CHECK_FALSE(bad.support_upper_ok);
  CHECK(std::find(bad.support_upper_violations.begin(), bad.support_upper_violations.end(), 0) !=
        bad.support_upper_violations.end());
  CHECK(bad.lower_ok);
  const auto id = matrix({{"1", "0"}, {"0", "1"}});
  CHECK(frostman_verify(id, {}, measure({q(1, 2), q(1, 2)}), ExactReal(q(1, 2))).all_ok());

  const auto mix = matrix({{"inf", "1"}, {"1", "3"}});
  const auto rep = frostman_verify(mix, {}, measure({q(0), q(1)}), ExactReal(3));
  CHECK(rep.exceptional_points == IndexSet{0});
  CHECK(rep.all_ok());
}

TEST_CASE("rendezvous") {
  const auto t = matrix({{"0", "5"}, {"5", "0"}});
  const auto r = rendezvous(t, {});
  CHECK(r.r_value == ExactReal(q(5, 2)));
  REQUIRE(r.invariant_measure);
  CHECK(r.invariant_measure->weights() == std::vector<Rational>{q(1, 2), q(1, 2)});
  CHECK(*r.constancy_defect == 0);

  const auto k = three_point();
  const auto r3 = rendezvous(k, {});
  CHECK(r3.r_value == ExactReal(2));
  REQUIRE(r3.invariant_measure);
  CHECK(*r3.invariant_measure == DiscreteMeasure<Rational>::dirac(3, 1));
  CHECK(*r3.constancy_defect == 0);

  const auto c = constant_kernel(4, q(3));
  const auto rc = rendezvous(c, {});
  CHECK(rc.r_value == ExactReal(3));
  REQUIRE(rc.invariant_measure);
  for (const auto& x : rc.invariant_measure->weights()) CHECK(x > 0);

  CHECK_THROWS_AS(rendezvous(matrix({{"inf", "1"}, {"1", "0"}}), {}), ValidationError);
}

TEST_CASE("no invariant measure when potentials cannot be equalized") {
  // Equal potentials at 0 and 1 force p0 = p1, and then 3 p0 + 4 p2 = 8 p0 + 9 p2 has no solution.
  const auto k = matrix({{"1", "2", "4"}, {"2", "1", "4"}, {"4", "4", "9"}});
  const auto r = rendezvous(k, {});
  CHECK_FALSE(r.invariant_measure);
  CHECK(r.r_value == minimax_q(k, {}).value);
  CHECK(wiener_energy(k, {}).w_value < r.r_value);
}

TEST_CASE("random kernels: lattice oracle, chain, Frostman, rendezvous") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 120; ++it) {
    const std::size_t s = 2 + static_cast<std::size_t>(it % 3);
    const bool with_inf = it % 3 == 0;
    const auto k = with_inf ? random_kernel_with_inf(rng, s, 0.25) : random_kernel(rng, s);
    const auto all = full_index_set(s);
    const auto e = wiener_energy(k, {});
    const auto m = minimax_energies(k, {});
    CHECK(e.w_value <= m.v.value);
    CHECK(m.v.value <= m.u.value);
    CHECK(e.w_value <= m.q.value);
    CHECK(m.q.value <= m.u.value);
    if (e.w_value.is_finite()) {
      REQUIRE(e.minimizer);
      CHECK(energy(k, *e.minimizer) == e.w_value);
      CHECK(m.v.value == e.w_value);
      CHECK(frostman_verify(k, {}, *e.minimizer, e.w_value).all_ok());
      // The lattice minimum bounds w from above.
      const double lat = oracle::lattice_energy(k, all, 24);
      CHECK(e.w_value.to_double() <= lat + 1e-12);
      CHECK(lat - e.w_value.to_double() <= 1.0);
    } else {
      CHECK(oracle::lattice_energy(k, all, 12) == oracle::kInf);
    }
    if (m.q.value.is_finite()) {
      CHECK(m.q.value.to_double() <= oracle::lattice_minimax(k, all, all, 24) + 1e-12);
    }
    for (std::size_t n = 2; n <= 4; ++n) CHECK(dn_exact(k, {}, n).value <= e.w_value);
    if (!with_inf) {
      const auto r = rendezvous(k, {});
      CHECK(r.r_value == m.q.value);
      CHECK(e.w_value <= r.r_value);
      if (r.r_value == e.w_value) CHECK(r.invariant_measure.has_value());
      if (r.invariant_measure) {
        const auto u = potential(k, *r.invariant_measure);
        for (auto x : all) CHECK(u[x] == r.r_value);
      }
    }
  }
}

TEST_CASE("float mode agrees with exact mode") {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 40; ++it) {
    const auto k = random_kernel(rng, 4);
    std::vector<FloatReal> fv;
    for (const auto& x : k.values()) fv.push_back(FloatReal(x.to_double()));
    const Kernel<double> f(k.space(), fv);
    const auto ew = wiener_energy(k, {}).w_value.to_double();
    const auto fw = wiener_energy(f, {});
    CHECK(fw.certification == Certification::float_certified);
    CHECK(fw.w_value.value() == doctest::Approx(ew).epsilon(1e-9));
    CHECK(minimax_q(f, {}).value.value() == doctest::Approx(minimax_q(k, {}).value.to_double()).epsilon(1e-9));
  }
}

TEST_CASE("beyond the enumeration threshold") {
  std::mt19937_64 rng(47);
  const auto k = random_kernel(rng, 8);
  EnergyOptions o;
  o.enumeration_threshold = 4;
  const auto h = wiener_energy(k, {}, o);
  CHECK(h.certification == Certification::heuristic_upper_bound);
  const auto ex = wiener_energy(k, {});
  CHECK(ex.w_value <= h.w_value);
  CHECK(h.w_value.to_double() - ex.w_value.to_double() <= 1e-6);
}
