#pragma once

// Brute-force reference computations. They share no code with the solvers:
// ordered tuples instead of pruned multisets, lattice sampling of the
// simplex instead of face enumeration or LPs.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "abspot/space_kernel.hpp"

namespace abspot::oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Scalar>
void for_each_tuple(const IndexSet& pool, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> digit(n, 0), tuple(n, pool.front());
  while (true) {
    for (std::size_t i = 0; i < n; ++i) tuple[i] = pool[digit[i]];
    f(tuple);
    std::size_t i = 0;
    while (i < n && ++digit[i] == pool.size()) digit[i++] = 0;
    if (i == n) return;
  }
}

/// min over ordered n-tuples of the average off-diagonal pair value.
template <class Scalar>
ExtReal<Scalar> dn(const Kernel<Scalar>& k, const IndexSet& pool, std::size_t n) {
  bool any = false;
  ExtReal<Scalar> best;
  for_each_tuple<Scalar>(pool, n, [&](const std::vector<std::size_t>& t) {
    ExtReal<Scalar> sum;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b) sum += k(t[a], t[b]);
      }
    }
    if (!any || sum < best) best = sum;
    any = true;
  });
  if (best.is_infinite()) return best;
  return ExtReal<Scalar>(Scalar(best.value() / Scalar(static_cast<long>(n * (n - 1)))));
}

/// max over ordered zero tuples of min over x of the averaged log-polynomial.
template <class Scalar>
ExtReal<Scalar> mn(const Kernel<Scalar>& k, const IndexSet& pool, std::size_t n) {
  bool any = false;
  ExtReal<Scalar> best;
  for_each_tuple<Scalar>(pool, n, [&](const std::vector<std::size_t>& t) {
    ExtReal<Scalar> inf = ExtReal<Scalar>::infinity();
    for (auto x : pool) {
      ExtReal<Scalar> sum;
      for (auto z : t) sum += k(x, z);
      if (sum < inf) inf = sum;
    }
    if (!any || inf > best) best = inf;
    any = true;
  });
  if (best.is_infinite()) return best;
  return ExtReal<Scalar>(Scalar(best.value() / Scalar(static_cast<long>(n))));
}

/// Calls f on every probability vector over `pool` with weights a_i / d.
inline void for_each_lattice_point(std::size_t parts, std::size_t d,
                                   const std::function<void(const std::vector<double>&)>& f) {
  std::vector<std::size_t> a(parts, 0);
  std::vector<double> p(parts);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == parts) {
      a[i] = left;
      for (std::size_t j = 0; j < parts; ++j) p[j] = static_cast<double>(a[j]) / static_cast<double>(d);
      f(p);
      return;
    }
    for (std::size_t x = 0; x <= left; ++x) {
      a[i] = x;
      rec(i + 1, left - x);
    }
  };
  rec(0, d);
}

/// U(x) = sum over charged j of p_j k(x, j), with 0 * inf = 0.
template <class Scalar>
double pot(const Kernel<Scalar>& k, const IndexSet& pool, const std::vector<double>& p, std::size_t x) {
  double s = 0.0;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (p[j] == 0.0) continue;
    const auto& v = k(x, pool[j]);
    if (v.is_infinite()) return kInf;
    s += p[j] * v.to_double();
  }
  return s;
}

/// Lattice minimum of the energy: an upper bound on w that approaches it as d grows.
template <class Scalar>
double lattice_energy(const Kernel<Scalar>& k, const IndexSet& pool, std::size_t d) {
  double best = kInf;
  for_each_lattice_point(pool.size(), d, [&](const std::vector<double>& p) {
    double e = 0.0;
    for (std::size_t i = 0; i < pool.size() && e < kInf; ++i) {
      if (p[i] == 0.0) continue;
      const double u = pot(k, pool, p, pool[i]);
      e = u == kInf ? kInf : e + p[i] * u;
    }
    best = std::min(best, e);
  });
  return best;
}

/// Lattice minimum of max over `rows` of the potential of a measure on `pool`.
template <class Scalar>
double lattice_minimax(const Kernel<Scalar>& k, const IndexSet& pool, const IndexSet& rows, std::size_t d) {
  double best = kInf;
  for_each_lattice_point(pool.size(), d, [&](const std::vector<double>& p) {
    double m = 0.0;
    for (auto x : rows) m = std::max(m, pot(k, pool, p, x));
    best = std::min(best, m);
  });
  return best;
}

/// Largest U(mu) - V(mu) over lattice measures on the whole space (with V finite).
template <class Scalar>
double lattice_mp_gap(const Kernel<Scalar>& k, std::size_t d) {
  const IndexSet all = full_index_set(k.size());
  double worst = -kInf;
  for_each_lattice_point(all.size(), d, [&](const std::vector<double>& p) {
    double u = 0.0, v = 0.0;
    for (auto x : all) {
      const double px = pot(k, all, p, x);
      u = std::max(u, px);
      if (p[x] > 0.0) v = std::max(v, px);
    }
    if (v == kInf) return;
    worst = std::max(worst, u - v);
  });
  return worst;
}

}  // namespace abspot::oracle
