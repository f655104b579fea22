#pragma once

#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "abspot/fixtures.hpp"
#include "abspot/space_kernel.hpp"

namespace abspot::test {

using ExactKernel = Kernel<Rational>;

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline FiniteSpace numbered_space(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return FiniteSpace::labelled(std::move(labels));
}

/// Rows of "inf" or rational literals.
inline ExactKernel matrix(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ExactReal> v;
  for (const auto& r : rows) {
    for (const auto& e : r) v.push_back(e == "inf" ? ExactReal::infinity() : ExactReal(parse_rational(e)));
  }
  return ExactKernel(numbered_space(rows.size()), std::move(v));
}

inline ExactKernel three_point() { return build_kernel<Rational>(fixture("three-point").spec); }

inline ExactKernel constant_kernel(std::size_t n, const Rational& c) {
  return ExactKernel(numbered_space(n), std::vector<ExactReal>(n * n, ExactReal(c)));
}

/// Symmetric kernel with entries k/10, k uniform in 0..100.
inline ExactKernel random_kernel(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> num(0, 100);
  std::vector<ExactReal> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Rational x(num(rng), 10);
      x.canonicalize();
      v[i * n + j] = v[j * n + i] = ExactReal(x);
    }
  }
  return ExactKernel(numbered_space(n), std::move(v));
}

/// Random kernel where each entry is +inf with probability p_inf.
inline ExactKernel random_kernel_with_inf(std::mt19937_64& rng, std::size_t n, double p_inf) {
  auto k = random_kernel(rng, n);
  std::bernoulli_distribution coin(p_inf);
  std::vector<ExactReal> v = k.values();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (coin(rng)) v[i * n + j] = v[j * n + i] = ExactReal::infinity();
    }
  }
  return ExactKernel(k.space(), std::move(v));
}

/// k(x, y) = g(height of the lowest common ancestor) on a random binary
/// merge tree, g decreasing, g(0) on the diagonal.
inline ExactKernel ultrametric_kernel(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  std::vector<int> level(n * n, 0);
  int height = 0;
  while (clusters.size() > 1) {
    ++height;
    std::uniform_int_distribution<std::size_t> pick(0, clusters.size() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    while (b == a) b = pick(rng);
    for (auto x : clusters[a]) {
      for (auto y : clusters[b]) level[x * n + y] = level[y * n + x] = height;
    }
    clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
  }
  std::uniform_int_distribution<int> step(1, 20);
  std::vector<Rational> g(static_cast<std::size_t>(height) + 1);
  g[static_cast<std::size_t>(height)] = q(step(rng) - 1, 4);
  for (int h = height - 1; h >= 0; --h) g[static_cast<std::size_t>(h)] = g[static_cast<std::size_t>(h) + 1] + q(step(rng), 4);
  std::vector<ExactReal> v(n * n);
  for (std::size_t i = 0; i < n * n; ++i) v[i] = ExactReal(g[static_cast<std::size_t>(level[i])]);
  return ExactKernel(numbered_space(n), std::move(v));
}

/// k'(i, j) = k(perm[i], perm[j]).
template <class Scalar>
Kernel<Scalar> permuted(const Kernel<Scalar>& k, const std::vector<std::size_t>& perm) {
  const std::size_t n = k.size();
  std::vector<ExtReal<Scalar>> v(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) v[i * n + j] = k(perm[i], perm[j]);
  }
  return Kernel<Scalar>(numbered_space(n), std::move(v));
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace abspot::test
