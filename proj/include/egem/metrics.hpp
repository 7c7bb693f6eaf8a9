#pragma once

#include <cstdint>
#include <vector>

#include "egem/data.hpp"
#include "egem/simdata.hpp"

namespace egem {

/// max over relabelings sigma of n^-1 sum 1{sigma(est_i) = truth_i}, via
/// optimal assignment. Labels 0-based in [0, K).
double accuracy(const std::vector<int>& est, const std::vector<int>& truth, int K);

/// Adjusted Rand index. A zero denominator yields 1 for identical partitions, 0 otherwise.
double ari(const std::vector<int>& est, const std::vector<int>& truth);

/// Maximum-weight assignment on a square matrix; returns column for each row.
std::vector<int> max_weight_assignment(const Matrix& weight);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centers;
  double objective = 0.0;
  std::vector<double> objective_trace;  ///< winning start, after each assignment
};

/// Best-of-starts Lloyd iteration from distinct random rows.
KMeansResult kmeans(const DataMatrix& X, int K, int starts, std::uint64_t seed, int max_iter = 100);
std::vector<int> kmeans_baseline(const DataMatrix& X, int K, int starts, std::uint64_t seed);

/// Plain coordinate-wise K-median (no feature thresholding).
std::vector<int> kmedian_baseline(const DataMatrix& X, int K, int starts, std::uint64_t seed);

/// Nearest true center in the true-scatter Mahalanobis metric.
std::vector<int> oracle_classify(const DataMatrix& X, const SimDesign& design);

}  // namespace egem
