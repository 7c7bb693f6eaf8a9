#include "egem/data.hpp"

#include <algorithm>
#include <numeric>

#include "egem/error.hpp"
#include "egem/rng.hpp"

namespace egem {

double median_inplace(std::span<double> values) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "median of an empty set");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Vector column_medians(const DataMatrix& X) {
  Vector out(X.cols());
  std::vector<double> buf(static_cast<std::size_t>(X.rows()));
  for (Index j = 0; j < X.cols(); ++j) {
    for (Index i = 0; i < X.rows(); ++i) buf[static_cast<std::size_t>(i)] = X(i, j);
    out(j) = median_inplace(buf);
  }
  return out;
}

DataMatrix permute_columns(const DataMatrix& X, std::uint64_t seed) {
  const Index n = X.rows();
  DataMatrix out(n, X.cols());
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index j = 0; j < X.cols(); ++j) {
    std::iota(perm.begin(), perm.end(), Index{0});
    CounterRng rng(seed, {static_cast<std::uint64_t>(j)});
    // Fisher-Yates with an explicit draw so the result does not depend on the
    // standard library's shuffle implementation.
    for (Index i = n - 1; i > 0; --i) {
      const auto r = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(r)]);
    }
    for (Index i = 0; i < n; ++i) out(i, j) = X(perm[static_cast<std::size_t>(i)], j);
  }
  return out;
}

Matrix one_hot(const std::vector<int>& labels, int K) {
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), K);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= K) fail(ErrorCode::LabelOutOfRange, "label outside [0, K)");
    out(static_cast<Index>(i), labels[i]) = 1.0;
  }
  return out;
}

}  // namespace egem
