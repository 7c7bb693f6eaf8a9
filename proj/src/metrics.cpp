#include "egem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "egem/error.hpp"
#include "egem/gem.hpp"
#include "egem/rng.hpp"
#include "egem/sparse_kmedian.hpp"

namespace egem {
namespace {

void check_labels(const std::vector<int>& labels, int K) {
  for (int l : labels)
    if (l < 0 || l >= K) fail(ErrorCode::LabelOutOfRange, "label " + std::to_string(l) + " outside [0, K)");
}

std::vector<Index> distinct_rows(const DataMatrix& X, int K, CounterRng& rng) {
  std::vector<Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<Index> picked;
  for (Index i = 0; i < X.rows() && static_cast<int>(picked.size()) < K; ++i) {
    std::uniform_int_distribution<Index> pick(i, X.rows() - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    const Index cand = order[static_cast<std::size_t>(i)];
    bool dup = false;
    for (Index c : picked) dup = dup || X.row(c) == X.row(cand);
    if (!dup) picked.push_back(cand);
  }
  // Fewer distinct rows than K: fill with repeats.
  for (Index i = 0; static_cast<int>(picked.size()) < K; ++i) picked.push_back(order[static_cast<std::size_t>(i)]);
  return picked;
}

}  // namespace

std::vector<int> max_weight_assignment(const Matrix& weight) {
  // Hungarian algorithm (shortest augmenting path) on cost = -weight.
  const int n = static_cast<int>(weight.rows());
  if (weight.cols() != n) fail(ErrorCode::DimensionMismatch, "assignment needs a square matrix");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) col_of_row[static_cast<std::size_t>(match[j] - 1)] = j - 1;
  return col_of_row;
}

double accuracy(const std::vector<int>& est, const std::vector<int>& truth, int K) {
  if (est.size() != truth.size()) fail(ErrorCode::DimensionMismatch, "label vectors differ in length");
  if (est.empty()) fail(ErrorCode::InvalidArgument, "accuracy of an empty labeling");
  if (K < 1) fail(ErrorCode::InvalidArgument, "K must be positive");
  check_labels(est, K);
  check_labels(truth, K);
  Matrix counts = Matrix::Zero(K, K);
  for (std::size_t i = 0; i < est.size(); ++i) counts(est[i], truth[i]) += 1.0;
  const std::vector<int> perm = max_weight_assignment(counts);
  double hit = 0.0;
  for (int k = 0; k < K; ++k) hit += counts(k, perm[static_cast<std::size_t>(k)]);
  return hit / static_cast<double>(est.size());
}

double ari(const std::vector<int>& est, const std::vector<int>& truth) {
  if (est.size() != truth.size()) fail(ErrorCode::DimensionMismatch, "label vectors differ in length");
  if (est.size() < 2) fail(ErrorCode::InvalidArgument, "ARI needs at least two observations");
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < est.size(); ++i) {
    table[{est[i], truth[i]}] += 1.0;
    rows[est[i]] += 1.0;
    cols[truth[i]] += 1.0;
  }
  double index = 0.0, a = 0.0, b = 0.0;
  for (const auto& [key, c] : table) index += choose2(c);
  for (const auto& [key, c] : rows) a += choose2(c);
  for (const auto& [key, c] : cols) b += choose2(c);
  const double expected = a * b / choose2(static_cast<double>(est.size()));
  const double denom = 0.5 * (a + b) - expected;
  if (denom == 0.0) {
    // Identical partitions up to relabeling have as many blocks as joint cells.
    const bool same = table.size() == rows.size() && table.size() == cols.size();
    return same ? 1.0 : 0.0;
  }
  return (index - expected) / denom;
}

KMeansResult kmeans(const DataMatrix& X, int K, int starts, std::uint64_t seed, int max_iter) {
  const Index n = X.rows();
  if (K < 1 || n < K) fail(ErrorCode::Infeasible, "K-means needs 1 <= K <= n");
  if (starts < 1 || max_iter < 1) fail(ErrorCode::InvalidArgument, "K-means needs starts, max_iter >= 1");
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    CounterRng rng(seed, {0x3EA, static_cast<std::uint64_t>(s)});
    KMeansResult cur;
    cur.centers.resize(K, X.cols());
    const auto rows = distinct_rows(X, K, rng);
    for (int k = 0; k < K; ++k) cur.centers.row(k) = X.row(rows[static_cast<std::size_t>(k)]);
    cur.labels.assign(static_cast<std::size_t>(n), -1);
    Vector dist(n);
    for (int it = 0; it < max_iter; ++it) {
      bool changed = false;
      double obj = 0.0;
      for (Index i = 0; i < n; ++i) {
        int arg = 0;
        double bestd = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
          const double d = (X.row(i) - cur.centers.row(k)).squaredNorm();
          if (d < bestd) {
            bestd = d;
            arg = k;
          }
        }
        dist(i) = bestd;
        obj += bestd;
        changed = changed || cur.labels[static_cast<std::size_t>(i)] != arg;
        cur.labels[static_cast<std::size_t>(i)] = arg;
      }
      cur.objective = obj;
      cur.objective_trace.push_back(obj);
      if (!changed && it > 0) break;
      Matrix sums = Matrix::Zero(K, X.cols());
      std::vector<Index> sizes(static_cast<std::size_t>(K), 0);
      for (Index i = 0; i < n; ++i) {
        sums.row(cur.labels[static_cast<std::size_t>(i)]) += X.row(i);
        ++sizes[static_cast<std::size_t>(cur.labels[static_cast<std::size_t>(i)])];
      }
      for (int k = 0; k < K; ++k) {
        if (sizes[static_cast<std::size_t>(k)] > 0) {
          cur.centers.row(k) = sums.row(k) / static_cast<double>(sizes[static_cast<std::size_t>(k)]);
        } else {
          Index far = 0;
          dist.maxCoeff(&far);
          cur.centers.row(k) = X.row(far);
          dist(far) = 0.0;
        }
      }
    }
    if (cur.objective < best.objective) best = std::move(cur);
  }
  return best;
}

std::vector<int> kmeans_baseline(const DataMatrix& X, int K, int starts, std::uint64_t seed) {
  return kmeans(X, K, starts, seed).labels;
}

std::vector<int> kmedian_baseline(const DataMatrix& X, int K, int starts, std::uint64_t seed) {
  return kmedian_fit_at_tau(X, K, 0.0, starts, 50, seed).labels;
}

std::vector<int> oracle_classify(const DataMatrix& X, const SimDesign& design) {
  const Matrix mu = build_means(design.mean_kind, design.p, design.K, design.delta);
  const SymMatrix omega = inverse_pd(build_scatter(design.scatter, design.p));
  const Matrix radii = mahalanobis_radii(X, mu, omega);
  return row_argmax(-radii);
}

}  // namespace egem
