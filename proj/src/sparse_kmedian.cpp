#include "egem/sparse_kmedian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "egem/error.hpp"
#include "egem/rng.hpp"
#include "egem/simd/kernels.hpp"

namespace egem {
namespace {

void check_feasible(const DataMatrix& X, int K) {
  if (K < 1) fail(ErrorCode::InvalidArgument, "K must be at least 1");
  if (X.rows() < K) {
    fail(ErrorCode::Infeasible,
         "K = " + std::to_string(K) + " exceeds the number of observations " + std::to_string(X.rows()));
  }
  if (X.cols() < 1) fail(ErrorCode::InvalidArgument, "data matrix has no columns");
}

// Gathers the active coordinates into contiguous row-major storage.
RowMatrix gather_columns(const Matrix& A, const std::vector<Index>& cols) {
  RowMatrix out(A.rows(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Index>(c)) = A.col(cols[c]);
  return out;
}

// Row indices of every column in ascending value order. Shared by all fits on
// the same data, so cluster medians reduce to one linear pass per column.
struct ColumnOrder {
  std::vector<std::int32_t> order;  // column j occupies [j * n, (j + 1) * n)
  std::vector<double> sorted;       // X values in the same layout
  Vector overall;                   // column medians
  RowMatrix rows;                   // X in row-major storage
};

ColumnOrder order_columns(const DataMatrix& X) {
  const Index n = X.rows();
  const Index p = X.cols();
  ColumnOrder c;
  c.order.resize(static_cast<std::size_t>(n * p));
  c.sorted.resize(c.order.size());
  c.overall.resize(p);
  c.rows = X;
  for (Index j = 0; j < p; ++j) {
    auto first = c.order.begin() + static_cast<std::ptrdiff_t>(j * n);
    auto last = first + static_cast<std::ptrdiff_t>(n);
    std::iota(first, last, std::int32_t{0});
    std::sort(first, last, [&](std::int32_t a, std::int32_t b) { return X(a, j) < X(b, j); });
    for (Index r = 0; r < n; ++r) c.sorted[static_cast<std::size_t>(j * n + r)] = X(first[r], j);
    const double upper = X(first[n / 2], j);
    c.overall(j) = n % 2 == 1 ? upper : 0.5 * (X(first[n / 2 - 1], j) + upper);
  }
  return c;
}

Matrix cluster_medians(const DataMatrix& X, const ColumnOrder& ord, const std::vector<int>& labels, int K,
                       const Matrix& fallback) {
  const Index n = X.rows();
  const Index p = X.cols();
  Matrix med = fallback;
  const auto Ku = static_cast<std::size_t>(K);
  std::vector<Index> size(Ku, 0);
  for (int l : labels) ++size[static_cast<std::size_t>(l)];
  // Ranks of the lower and upper middle order statistics within each cluster.
  std::vector<Index> lo(Ku), hi(Ku);
  Index pending_init = 0;
  for (std::size_t k = 0; k < Ku; ++k) {
    hi[k] = size[k] > 0 ? size[k] / 2 : -1;
    lo[k] = size[k] > 0 ? (size[k] - 1) / 2 : -1;
    pending_init += size[k] > 0 ? 1 : 0;
  }
  std::vector<Index> seen(Ku);
  std::vector<double> lower(Ku);
  for (Index j = 0; j < p; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    const std::int32_t* idx = ord.order.data() + j * n;
    const double* val = ord.sorted.data() + j * n;
    Index pending = pending_init;
    for (Index r = 0; r < n && pending > 0; ++r) {
      const auto k = static_cast<std::size_t>(labels[static_cast<std::size_t>(idx[r])]);
      const Index rank = seen[k]++;
      if (rank == lo[k]) lower[k] = val[r];
      if (rank == hi[k]) {
        med(static_cast<Index>(k), j) = 0.5 * (lower[k] + val[r]);
        --pending;
      }
    }
  }
  return med;
}

struct Assignment {
  std::vector<int> labels;
  std::vector<double> distance;  // to the assigned center
  double objective = 0.0;
};

Assignment assign_l1(const RowMatrix& Xs, const RowMatrix& Ms) {
  const auto& kern = simd::kernels();
  const Index n = Xs.rows();
  const Index K = Ms.rows();
  const auto len = static_cast<std::size_t>(Xs.cols());
  Assignment a{std::vector<int>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n)), 0.0};
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Index k = 0; k < K; ++k) {
      const double d = kern.l1_distance(Xs.row(i).data(), Ms.row(k).data(), len);
      if (d < best) {  // strict: ties keep the lowest cluster index
        best = d;
        arg = static_cast<int>(k);
      }
    }
    a.labels[static_cast<std::size_t>(i)] = arg;
    a.distance[static_cast<std::size_t>(i)] = best;
    a.objective += best;
  }
  return a;
}

// Moves the observation farthest from its own center into each empty cluster.
void repair_empty(Assignment& a, int K) {
  std::vector<Index> counts(static_cast<std::size_t>(K), 0);
  for (int l : a.labels) ++counts[static_cast<std::size_t>(l)];
  for (int k = 0; k < K; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) continue;
    Index arg = -1;
    double far = -1.0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (counts[static_cast<std::size_t>(a.labels[i])] <= 1) continue;
      if (a.distance[i] > far) {
        far = a.distance[i];
        arg = static_cast<Index>(i);
      }
    }
    if (arg < 0) break;
    --counts[static_cast<std::size_t>(a.labels[static_cast<std::size_t>(arg)])];
    a.labels[static_cast<std::size_t>(arg)] = k;
    a.distance[static_cast<std::size_t>(arg)] = 0.0;
    counts[static_cast<std::size_t>(k)] = 1;
  }
}

double between_dispersion(const Vector& overall, const KMedianState& s, int K) {
  std::vector<double> nk(static_cast<std::size_t>(K), 0.0);
  for (int l : s.labels) nk[static_cast<std::size_t>(l)] += 1.0;
  double b = 0.0;
  for (int k = 0; k < K; ++k) {
    double acc = 0.0;
    for (Index j : s.active_set) acc += std::fabs(s.medians(k, j) - overall(j));
    b += nk[static_cast<std::size_t>(k)] * acc;
  }
  return b;
}

Matrix random_rows(const DataMatrix& X, int K, CounterRng& rng) {
  const Index n = X.rows();
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Matrix out(K, X.cols());
  for (int k = 0; k < K; ++k) {
    const auto r = static_cast<Index>(k) +
                   static_cast<Index>(rng() % static_cast<std::uint64_t>(n - static_cast<Index>(k)));
    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(r)]);
    out.row(k) = X.row(idx[static_cast<std::size_t>(k)]);
  }
  return out;
}

}  // namespace

DispersionSupport dispersion_and_support(const Matrix& medians, double tau) {
  if (medians.rows() < 1) fail(ErrorCode::InvalidArgument, "dispersion needs at least one cluster");
  const Vector centre = medians.colwise().mean().transpose();
  DispersionSupport out;
  out.dispersion = (medians.rowwise() - centre.transpose()).cwiseAbs().colwise().sum().transpose();
  for (Index j = 0; j < out.dispersion.size(); ++j) {
    if (out.dispersion(j) >= tau) out.support.push_back(j);
  }
  if (out.support.empty()) {
    out.support.resize(static_cast<std::size_t>(medians.cols()));
    std::iota(out.support.begin(), out.support.end(), Index{0});
  }
  return out;
}

namespace {

KMedianState fit_from(const DataMatrix& X, const ColumnOrder& ord, const Matrix& initial_medians, double tau,
                      int max_iter) {
  const int K = static_cast<int>(initial_medians.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  KMedianState s;
  s.medians = initial_medians;
  std::vector<Index> prev_support;
  // Active columns of X, regathered only when the support changes.
  std::vector<Index> gathered_for;
  RowMatrix gathered;
  auto active_rows = [&]() -> const RowMatrix& {
    if (s.active_set.size() == p) return ord.rows;
    if (s.active_set != gathered_for) {
      gathered = gather_columns(X, s.active_set);
      gathered_for = s.active_set;
    }
    return gathered;
  };
  bool settled = false;
  for (int it = 0; it < std::max(1, max_iter); ++it) {
    s.active_set = dispersion_and_support(s.medians, tau).support;
    Assignment a = assign_l1(active_rows(), gather_columns(s.medians, s.active_set));
    s.objective_trace.push_back(a.objective);
    repair_empty(a, K);
    s.iterations = it + 1;
    const bool stable = a.labels == s.labels && s.active_set == prev_support;
    s.labels = std::move(a.labels);
    if (stable) {
      // The medians already match these labels, so the objective is current.
      s.objective = s.objective_trace.back();
      settled = true;
      break;
    }
    prev_support = s.active_set;
    s.medians = cluster_medians(X, ord, s.labels, K, s.medians);
  }
  if (!settled) {
    s.active_set = dispersion_and_support(s.medians, tau).support;
    s.objective = assign_l1(active_rows(), gather_columns(s.medians, s.active_set)).objective;
  }
  s.between_dispersion = between_dispersion(ord.overall, s, K);
  return s;
}

KMedianState fit_at_tau(const DataMatrix& X, const ColumnOrder& ord, int K, double tau, int starts, int max_iter,
                        std::uint64_t seed) {
  KMedianState best;
  bool have = false;
  for (int s = 0; s < starts; ++s) {
    CounterRng rng(seed, {static_cast<std::uint64_t>(s)});
    KMedianState cand = fit_from(X, ord, random_rows(X, K, rng), tau, max_iter);
    if (!have || cand.objective < best.objective) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

}  // namespace

KMedianState kmedian_fit_from(const DataMatrix& X, const Matrix& initial_medians, double tau, int max_iter) {
  check_feasible(X, static_cast<int>(initial_medians.rows()));
  if (initial_medians.cols() != X.cols()) fail(ErrorCode::DimensionMismatch, "initial medians have the wrong width");
  return fit_from(X, order_columns(X), initial_medians, tau, max_iter);
}

KMedianState kmedian_fit_at_tau(const DataMatrix& X, int K, double tau, int starts, int max_iter,
                                std::uint64_t seed) {
  check_feasible(X, K);
  if (starts < 1) fail(ErrorCode::InvalidArgument, "starts must be at least 1");
  return fit_at_tau(X, order_columns(X), K, tau, starts, max_iter, seed);
}

std::vector<double> threshold_grid(const Vector& dispersion) {
  std::vector<double> pos;
  for (Index j = 0; j < dispersion.size(); ++j) {
    if (dispersion(j) > 0.0) pos.push_back(dispersion(j));
  }
  std::vector<double> grid{0.0};
  if (!pos.empty()) {
    std::sort(pos.begin(), pos.end());
    // Linear-interpolation quantiles (type 7).
    for (int q = 1; q <= 9; ++q) {
      const double h = (static_cast<double>(pos.size()) - 1.0) * q / 10.0;
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const std::size_t hi = std::min(lo + 1, pos.size() - 1);
      grid.push_back(pos[lo] + (h - static_cast<double>(lo)) * (pos[hi] - pos[lo]));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace {

ThresholdSelection select_tau(const DataMatrix& X, const ColumnOrder& ord, int K, std::vector<double> grid,
                              int permutations, std::uint64_t seed, const InitConfig& init) {
  std::sort(grid.begin(), grid.end());
  std::vector<DataMatrix> refs;
  std::vector<ColumnOrder> ref_orders;
  for (int b = 0; b < permutations; ++b) {
    refs.push_back(permute_columns(X, derive_seed(seed, {0xB0, static_cast<std::uint64_t>(b)})));
    ref_orders.push_back(order_columns(refs.back()));
  }

  const double ninf = -std::numeric_limits<double>::infinity();
  ThresholdSelection sel;
  sel.grid = grid;
  sel.scores.assign(grid.size(), ninf);
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const auto fit = fit_at_tau(X, ord, K, grid[t], init.starts, init.max_iter, derive_seed(seed, {0xF1, t, 0}));
    if (!(fit.between_dispersion > 0.0)) continue;
    double ref_sum = 0.0;
    int ref_count = 0;
    for (std::size_t b = 0; b < refs.size(); ++b) {
      const auto ref = fit_at_tau(refs[b], ref_orders[b], K, grid[t], init.starts, init.max_iter,
                                  derive_seed(seed, {0xF1, t, b + 1}));
      // Degenerate references carry no information about the null dispersion.
      if (ref.between_dispersion > 0.0) {
        ref_sum += std::log(ref.between_dispersion);
        ++ref_count;
      }
    }
    if (ref_count == 0) continue;
    sel.scores[t] = std::log(fit.between_dispersion) - ref_sum / ref_count;
  }
  std::size_t arg = 0;
  for (std::size_t t = 1; t < grid.size(); ++t) {
    if (sel.scores[t] > sel.scores[arg]) arg = t;
  }
  sel.tau = grid[arg];
  return sel;
}

}  // namespace

ThresholdSelection permutation_select_tau(const DataMatrix& X, int K, std::vector<double> grid,
                                          int permutations, std::uint64_t seed, const InitConfig& init) {
  if (grid.empty()) fail(ErrorCode::InvalidArgument, "threshold grid is empty");
  if (permutations < 1) fail(ErrorCode::InvalidArgument, "at least one permutation is required");
  check_feasible(X, K);
  return select_tau(X, order_columns(X), K, std::move(grid), permutations, seed, init);
}

Initialization initialize(const DataMatrix& X, int K, const InitConfig& init, std::uint64_t seed) {
  init.validate();
  check_feasible(X, K);
  const ColumnOrder ord = order_columns(X);
  Initialization out;
  if (K == 1) {
    const auto fit = fit_at_tau(X, ord, 1, 0.0, 1, init.max_iter, seed);
    out.centers = fit.medians;
    out.labels = fit.labels;
    out.hard_resp = one_hot(out.labels, 1);
    out.selection.grid = {0.0};
    out.selection.scores = {0.0};
    return out;
  }
  const auto pilot = fit_at_tau(X, ord, K, 0.0, init.starts, init.max_iter, derive_seed(seed, {0xA0}));
  const Vector D = dispersion_and_support(pilot.medians, 0.0).dispersion;
  out.selection = select_tau(X, ord, K, threshold_grid(D), init.permutations, derive_seed(seed, {0xA1}), init);
  const auto fit = fit_at_tau(X, ord, K, out.selection.tau, init.starts, init.max_iter, derive_seed(seed, {0xA2}));
  out.centers = fit.medians;
  out.labels = fit.labels;
  out.hard_resp = one_hot(out.labels, K);
  return out;
}

}  // namespace egem
