#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egem/matrix_ops.hpp"

namespace egem {

/// n x p observations, one row per observation.
using DataMatrix = Matrix;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Median of the values (mean of the two central order statistics for even
/// counts). The span is reordered in place.
double median_inplace(std::span<double> values);

/// Coordinate-wise medians of the rows of X.
Vector column_medians(const DataMatrix& X);

/// Each column independently permuted; the permutation of column j depends only
/// on (seed, j).
DataMatrix permute_columns(const DataMatrix& X, std::uint64_t seed);

/// Hard labels (0-based) to an n x K 0/1 matrix.
Matrix one_hot(const std::vector<int>& labels, int K);

}  // namespace egem
