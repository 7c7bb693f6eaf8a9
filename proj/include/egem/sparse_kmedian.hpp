#pragma once

#include <cstdint>
#include <vector>

#include "egem/config.hpp"
#include "egem/data.hpp"

namespace egem {

struct DispersionSupport {
  Vector dispersion;           ///< D_j = sum_k |c_kj - mean_k c_kj|
  std::vector<Index> support;  ///< {j : D_j >= tau}, or every coordinate when that set is empty
};

DispersionSupport dispersion_and_support(const Matrix& medians, double tau);

struct KMedianState {
  Matrix medians;                   ///< K x p coordinate-wise cluster medians
  std::vector<int> labels;          ///< 0-based
  std::vector<Index> active_set;
  double objective = 0.0;           ///< L1 objective over the active set
  double between_dispersion = 0.0;  ///< sum_k n_k sum_{j in S} |median_kj - overall median_j|
  int iterations = 0;
  /// Objective after each assignment step of the winning start.
  std::vector<double> objective_trace;
};

/// Alternates L1 assignment on the thresholded coordinate set with median
/// recomputation; best of `starts` random starts by objective.
KMedianState kmedian_fit_at_tau(const DataMatrix& X, int K, double tau, int starts, int max_iter,
                                std::uint64_t seed);

/// Same alternation from caller-supplied initial medians (one start).
KMedianState kmedian_fit_from(const DataMatrix& X, const Matrix& initial_medians, double tau, int max_iter);

/// Zero followed by the deciles of the positive dispersions.
std::vector<double> threshold_grid(const Vector& dispersion);

struct ThresholdSelection {
  double tau = 0.0;
  std::vector<double> grid;    ///< ascending
  std::vector<double> scores;  ///< log B_tau - mean_b log B_tau,b per grid value
};

/// Permutation-gap choice of the sparsity threshold; ties go to the smaller tau.
ThresholdSelection permutation_select_tau(const DataMatrix& X, int K, std::vector<double> grid,
                                          int permutations, std::uint64_t seed, const InitConfig& init = {});

struct Initialization {
  Matrix centers;      ///< K x p
  Matrix hard_resp;    ///< n x K, one 1 per row
  std::vector<int> labels;
  ThresholdSelection selection;
};

/// Full initializer: grid from the tau = 0 fit, permutation selection, refit.
Initialization initialize(const DataMatrix& X, int K, const InitConfig& init, std::uint64_t seed);

}  // namespace egem
