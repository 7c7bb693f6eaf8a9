#include "egem/model_selection.hpp"

#include <cmath>
#include <limits>

#include "egem/error.hpp"
#include "egem/parallel.hpp"
#include "egem/rng.hpp"

namespace egem {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double within_dispersion(const Matrix& radii, const std::vector<int>& labels) {
  if (static_cast<Index>(labels.size()) != radii.rows() || labels.empty()) {
    fail(ErrorCode::DimensionMismatch, "within_dispersion: labels and radii disagree");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int k = labels[i];
    if (k < 0 || k >= radii.cols()) fail(ErrorCode::LabelOutOfRange, "within_dispersion: label out of range");
    total += std::log1p(std::max(0.0, radii(static_cast<Index>(i), k)));
  }
  return total / static_cast<double>(labels.size());
}

double within_dispersion(const DataMatrix& X, const FitResult& fit) {
  return within_dispersion(mahalanobis_radii(X, fit.model), fit.labels);
}

int lse_rule(const std::vector<int>& Ks, const std::vector<double>& gap, const std::vector<double>& s) {
  if (Ks.empty() || gap.size() != Ks.size() || s.size() != Ks.size()) {
    fail(ErrorCode::DimensionMismatch, "lse_rule: inconsistent lengths");
  }
  for (std::size_t j = 0; j + 1 < Ks.size(); ++j) {
    if (gap[j] >= gap[j + 1] - s[j + 1]) return Ks[j];
  }
  return Ks.back();
}

int max_gap_rule(const std::vector<int>& Ks, const std::vector<double>& gap) {
  if (Ks.empty() || gap.size() != Ks.size()) fail(ErrorCode::DimensionMismatch, "max_gap_rule: inconsistent lengths");
  std::size_t best = 0;
  for (std::size_t j = 1; j < Ks.size(); ++j)
    if (gap[j] > gap[best] || (std::isnan(gap[best]) && !std::isnan(gap[j]))) best = j;
  return Ks[best];
}

GapTable gap_table_from(std::vector<int> Ks, std::vector<double> W, Matrix W_ref) {
  const std::size_t J = Ks.size();
  if (J == 0 || W.size() != J || static_cast<std::size_t>(W_ref.cols()) != J) {
    fail(ErrorCode::DimensionMismatch, "gap table: inconsistent shapes");
  }
  GapTable t;
  t.gap.assign(J, kNaN);
  t.s.assign(J, kNaN);
  t.surviving.assign(J, 0);
  for (std::size_t j = 0; j < J; ++j) {
    std::vector<double> logs;
    for (Index b = 0; b < W_ref.rows(); ++b) {
      const double w = W_ref(b, static_cast<Index>(j));
      if (std::isfinite(w) && w > 0.0) logs.push_back(std::log(w));
    }
    t.surviving[j] = static_cast<int>(logs.size());
    if (logs.empty() || !(W[j] > 0.0)) continue;
    const double nb = static_cast<double>(logs.size());
    double mean = 0.0;
    for (double l : logs) mean += l;
    mean /= nb;
    t.gap[j] = mean - std::log(W[j]);
    if (logs.size() >= 2) {
      double ss = 0.0;
      for (double l : logs) ss += (l - mean) * (l - mean);
      t.s[j] = std::sqrt(1.0 + 1.0 / nb) * std::sqrt(ss / (nb - 1.0));
    }
    if (logs.size() < static_cast<std::size_t>(W_ref.rows())) {
      t.notes.push_back("K=" + std::to_string(Ks[j]) + ": " + std::to_string(W_ref.rows() - logs.size()) +
                        " reference fits dropped");
    }
  }
  t.K_lse = lse_rule(Ks, t.gap, t.s);
  t.K_max = max_gap_rule(Ks, t.gap);
  t.Ks = std::move(Ks);
  t.W = std::move(W);
  t.W_ref = std::move(W_ref);
  return t;
}

GapTable select_k(const DataMatrix& X, const std::vector<int>& Ks, int B, const GemConfig& cfg) {
  if (Ks.empty()) fail(ErrorCode::InvalidArgument, "select_k: empty candidate grid");
  for (std::size_t j = 0; j < Ks.size(); ++j) {
    if (Ks[j] < 1 || (j > 0 && Ks[j] <= Ks[j - 1])) {
      fail(ErrorCode::InvalidArgument, "select_k: candidates must be positive and strictly ascending");
    }
  }
  if (B < 2) fail(ErrorCode::InvalidArgument, "select_k: B >= 2 reference samples required");
  cfg.validate();
  if (X.rows() < Ks.back()) fail(ErrorCode::Infeasible, "select_k: largest K exceeds the number of observations");

  std::vector<DataMatrix> refs(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) refs[static_cast<std::size_t>(b)] = permute_columns(X, derive_seed(cfg.seed, {0xBEF, static_cast<std::uint64_t>(b)}));

  const std::size_t J = Ks.size();
  const std::size_t cells = J * static_cast<std::size_t>(B + 1);
  std::vector<double> values(cells, kNaN);
  std::vector<std::string> errors(cells);
  parallel_for(cells, cfg.threads, [&](std::size_t c) {
    const std::size_t b = c / J;  // 0 is the observed data
    const std::size_t j = c % J;
    GemConfig local = cfg;
    local.K = Ks[j];
    local.threads = 1;
    local.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(Ks[j])});
    const DataMatrix& data = b == 0 ? X : refs[b - 1];
    try {
      values[c] = within_dispersion(data, fit(data, local));
    } catch (const Error& e) {
      errors[c] = e.what();
    }
  });

  std::vector<double> W(J);
  Matrix W_ref(B, static_cast<Index>(J));
  for (std::size_t j = 0; j < J; ++j) {
    if (std::isnan(values[j])) fail(ErrorCode::NonConvergence, "select_k: fit on the observed data failed at K=" +
                                                                  std::to_string(Ks[j]) + ": " + errors[j]);
    W[j] = values[j];
    for (int b = 0; b < B; ++b) W_ref(b, static_cast<Index>(j)) = values[(static_cast<std::size_t>(b) + 1) * J + j];
  }
  return gap_table_from(Ks, std::move(W), std::move(W_ref));
}

}  // namespace egem
