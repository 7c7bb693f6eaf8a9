#pragma once

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "egem/matrix_ops.hpp"
#include "egem/rng.hpp"

namespace egem::test {

inline Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  CounterRng rng(seed, {0x7E57});
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = nd(rng);
  return m;
}

/// Well-conditioned SPD matrix: G G^T / p + ridge I.
inline SymMatrix random_spd(Index p, std::uint64_t seed, double ridge = 0.5) {
  const Matrix g = random_matrix(p, p + 3, seed);
  Matrix s = g * g.transpose() / static_cast<double>(p);
  s.diagonal().array() += ridge;
  return SymMatrix(s);
}

inline double min_eigenvalue(const SymMatrix& a) { return ordered_eigen(a).values.minCoeff(); }

/// Accuracy by enumerating every relabeling.
inline double brute_accuracy(const std::vector<int>& est, const std::vector<int>& truth, int K) {
  std::vector<int> perm(static_cast<std::size_t>(K));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double hit = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) hit += perm[static_cast<std::size_t>(est[i])] == truth[i] ? 1.0 : 0.0;
    best = std::max(best, hit / static_cast<double>(est.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// ARI from pair counting over all pairs.
inline double brute_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, only_a = 0, only_b = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      both += sa && sb;
      only_a += sa;
      only_b += sb;
      total += 1;
    }
  }
  const double expected = only_a * only_b / total;
  const double denom = 0.5 * (only_a + only_b) - expected;
  if (denom == 0.0) {
    bool same = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) same = same && ((a[i] == a[j]) == (b[i] == b[j]));
    return same ? 1.0 : 0.0;
  }
  return (both - expected) / denom;
}

inline std::vector<std::vector<int>> all_labelings(int n, int K) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(cur);
    int pos = 0;
    while (pos < n && ++cur[static_cast<std::size_t>(pos)] == K) cur[static_cast<std::size_t>(pos++)] = 0;
    if (pos == n) break;
  }
  return out;
}

}  // namespace egem::test
