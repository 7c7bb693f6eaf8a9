#include "egem/gem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "egem/error.hpp"
#include "egem/parallel.hpp"
#include "egem/rng.hpp"
#include "egem/sparse_kmedian.hpp"

namespace egem {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

GeneratorEstimate generator_from(const Matrix& radii, const Matrix& resp, Index p, const GeneratorConfig& cfg) {
  return build_generator(WeightedRadii::from(radii, resp), static_cast<int>(p), cfg);
}

}  // namespace

double StepSizes::max() const noexcept { return std::max({center, precision, mixing}); }

Matrix mahalanobis_radii(const DataMatrix& X, const Matrix& centers, const SymMatrix& omega) {
  const Index p = X.cols();
  if (centers.cols() != p || omega.dim() != p) fail(ErrorCode::DimensionMismatch, "mahalanobis_radii: dimension mismatch");
  Matrix radii(X.rows(), centers.rows());
  for (Index k = 0; k < centers.rows(); ++k) {
    const Matrix d = X.rowwise() - centers.row(k);
    const Matrix dw = d * omega.mat();
    radii.col(k) = d.cwiseProduct(dw).rowwise().sum().cwiseMax(0.0);
  }
  return radii;
}

Matrix mahalanobis_radii(const DataMatrix& X, const ModelState& model) {
  return mahalanobis_radii(X, model.centers, model.omega);
}

Matrix log_component_scores(const Matrix& radii, const Vector& pi, const GeneratorEstimate& generator) {
  if (pi.size() != radii.cols()) fail(ErrorCode::DimensionMismatch, "log_component_scores: pi length");
  Matrix out(radii.rows(), radii.cols());
  for (Index k = 0; k < radii.cols(); ++k) {
    const double lp = pi(k) > 0.0 ? std::log(pi(k)) : kNegInf;
    for (Index i = 0; i < radii.rows(); ++i) out(i, k) = lp + generator.log_g_at(radii(i, k));
  }
  return out;
}

EStepResult e_step_from_scores(const Matrix& s) {
  const Index n = s.rows();
  const Index K = s.cols();
  EStepResult out{Matrix(n, K), Vector::Zero(K)};
  for (Index i = 0; i < n; ++i) {
    const double m = s.row(i).maxCoeff();
    if (!std::isfinite(m)) {
      out.resp.row(i).setConstant(1.0 / static_cast<double>(K));
      continue;
    }
    double total = 0.0;
    for (Index k = 0; k < K; ++k) {
      const double e = std::exp(s(i, k) - m);
      out.resp(i, k) = e;
      total += e;
    }
    out.resp.row(i) /= total;
  }
  out.pi = out.resp.colwise().mean().transpose();
  out.pi /= out.pi.sum();
  return out;
}

EStepResult e_step(const Matrix& radii, const ModelState& model) {
  return e_step_from_scores(log_component_scores(radii, model.pi, model.generator));
}

CenterUpdate center_update(const DataMatrix& X, const Responsibilities& resp, const Matrix& radii,
                           const GeneratorEstimate& generator, const Matrix& centers_prev, double eta_mu) {
  const Index K = centers_prev.rows();
  if (resp.rows() != X.rows() || resp.cols() != K || radii.rows() != X.rows() || radii.cols() != K ||
      centers_prev.cols() != X.cols()) {
    fail(ErrorCode::DimensionMismatch, "center_update: inconsistent shapes");
  }
  CenterUpdate out{centers_prev, {}};
  for (Index k = 0; k < K; ++k) {
    Vector w(X.rows());
    for (Index i = 0; i < X.rows(); ++i) w(i) = resp(i, k) * generator.score_at(radii(i, k));
    const double denom = w.sum();
    if (!(denom > 0.0)) {
      out.frozen.push_back(static_cast<int>(k));
      continue;
    }
    const Vector proposal = (X.transpose() * w) / denom;
    out.centers.row(k) = (1.0 - eta_mu) * centers_prev.row(k) + eta_mu * proposal.transpose();
  }
  return out;
}

IterationResult gem_iterate(const DataMatrix& X, const ModelState& model, const GemConfig& cfg) {
  const Index p = X.cols();
  const Matrix radii = mahalanobis_radii(X, model);
  EStepResult es = e_step(radii, model);

  IterationResult out;
  ModelState& next = out.model;
  next.pi = es.pi;
  next.generator = generator_from(radii, es.resp, p, cfg.generator);
  CenterUpdate cu = center_update(X, es.resp, radii, next.generator, model.centers, cfg.eta_mu);
  next.centers = std::move(cu.centers);

  const StackedResiduals res = stack_residuals(X, next.centers, es.resp);
  ShapeBlockResult shape = shape_block(res, model.omega, cfg.shape);
  next.omega = std::move(shape.omega);
  next.sigma = std::move(shape.sigma);

  auto& d = out.diagnostics;
  d.steps.center = (next.centers - model.centers).cwiseAbs().maxCoeff();
  d.steps.precision = (next.omega.mat() - model.omega.mat()).norm() / std::max(1.0, model.omega.mat().norm());
  d.steps.mixing = (next.pi - model.pi).cwiseAbs().maxCoeff();
  d.shape = shape.diagnostics;
  d.bandwidth = next.generator.bandwidth();
  d.frozen_centers = std::move(cu.frozen);
  out.resp = std::move(es.resp);
  return out;
}

double pseudo_loglikelihood_from_scores(const Matrix& s) {
  double total = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    const double m = s.row(i).maxCoeff();
    if (!std::isfinite(m)) return m;
    total += m + std::log((s.row(i).array() - m).exp().sum());
  }
  return total;
}

double pseudo_loglikelihood(const DataMatrix& X, const ModelState& model) {
  return pseudo_loglikelihood_from_scores(log_component_scores(mahalanobis_radii(X, model), model.pi, model.generator));
}

ModelState initial_model(const DataMatrix& X, const Matrix& centers, const Matrix& hard_resp,
                         const GeneratorConfig& gen_cfg) {
  const Index p = X.cols();
  ModelState m;
  m.centers = centers;
  m.omega = SymMatrix::identity(p);
  m.sigma = SymMatrix::identity(p);
  m.pi = hard_resp.colwise().mean().transpose();
  if ((m.pi.array() <= 0.0).any()) fail(ErrorCode::DegenerateWeights, "initialization left an empty cluster");
  m.pi /= m.pi.sum();
  m.generator = generator_from(mahalanobis_radii(X, m), hard_resp, p, gen_cfg);
  return m;
}

FitResult run_from(const DataMatrix& X, ModelState start, const GemConfig& cfg) {
  FitResult out;
  ModelState model = std::move(start);
  Responsibilities resp;
  for (int t = 0; t < cfg.max_outer; ++t) {
    IterationResult it = gem_iterate(X, model, cfg);
    model = std::move(it.model);
    resp = std::move(it.resp);
    out.trace.push_back(std::move(it.diagnostics));
    out.iterations = t + 1;
    if (out.trace.back().steps.max() <= cfg.outer_tol) {
      out.converged = true;
      break;
    }
  }
  const Matrix radii = mahalanobis_radii(X, model);
  if (resp.size() == 0) resp = e_step(radii, model).resp;
  model.generator = generator_from(radii, resp, X.cols(), cfg.generator);
  const Matrix scores = log_component_scores(radii, model.pi, model.generator);
  EStepResult es = e_step_from_scores(scores);
  model.pi = es.pi;
  out.resp = std::move(es.resp);
  out.labels = row_argmax(out.resp);
  out.model = std::move(model);
  out.pseudo_loglik = pseudo_loglikelihood(X, out.model);
  return out;
}

FitResult fit(const DataMatrix& X, const GemConfig& cfg) {
  cfg.validate();
  if (X.rows() < cfg.K) {
    fail(ErrorCode::Infeasible,
         "K = " + std::to_string(cfg.K) + " exceeds the number of observations " + std::to_string(X.rows()));
  }
  if (!X.allFinite()) fail(ErrorCode::Numeric, "data contain non-finite values");

  const auto n_starts = static_cast<std::size_t>(cfg.starts);
  std::vector<std::optional<FitResult>> runs(n_starts);
  std::vector<std::string> errors(n_starts);
  parallel_for(n_starts, cfg.threads, [&](std::size_t s) {
    try {
      const std::uint64_t seed = derive_seed(cfg.seed, {0x6E5, s});
      const Initialization init = initialize(X, cfg.K, cfg.init, seed);
      runs[s] = run_from(X, initial_model(X, init.centers, init.hard_resp, cfg.generator), cfg);
    } catch (const Error& e) {
      errors[s] = e.what();
    }
  });

  std::optional<std::size_t> best;
  std::vector<double> logliks(n_starts, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < n_starts; ++s) {
    if (!runs[s]) continue;
    logliks[s] = runs[s]->pseudo_loglik;
    if (!best || runs[s]->pseudo_loglik > runs[*best]->pseudo_loglik) best = s;
  }
  if (!best) fail(ErrorCode::NonConvergence, "every start failed; last error: " + errors.back());
  FitResult out = std::move(*runs[*best]);
  out.start = static_cast<int>(*best);
  out.start_logliks = std::move(logliks);
  return out;
}

std::vector<int> row_argmax(const Matrix& m) {
  std::vector<int> labels(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < m.cols(); ++k)
      if (m(i, k) > m(i, best)) best = k;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

std::vector<int> classify(const DataMatrix& X, const ModelState& model) {
  return row_argmax(log_component_scores(mahalanobis_radii(X, model), model.pi, model.generator));
}

}  // namespace egem
