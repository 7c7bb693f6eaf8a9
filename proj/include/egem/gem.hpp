#pragma once

#include <cstdint>
#include <vector>

#include "egem/config.hpp"
#include "egem/data.hpp"
#include "egem/generator.hpp"
#include "egem/matrix_ops.hpp"
#include "egem/shape.hpp"

namespace egem {

struct ModelState {
  Vector pi;        ///< K mixing weights
  Matrix centers;   ///< K x p
  SymMatrix omega;  ///< common precision
  SymMatrix sigma;  ///< trace-normalised inverse of omega
  GeneratorEstimate generator;

  Index K() const noexcept { return centers.rows(); }
  Index dim() const noexcept { return centers.cols(); }
};

/// n x K, rows sum to one.
using Responsibilities = Matrix;

struct StepSizes {
  double center = 0.0;     ///< max absolute center coordinate change
  double precision = 0.0;  ///< |Omega_new - Omega_old|_F / max(1, |Omega_old|_F)
  double mixing = 0.0;     ///< max absolute change in pi

  double max() const noexcept;
};

struct IterationDiagnostics {
  StepSizes steps;
  ShapeDiagnostics shape;
  double bandwidth = 0.0;
  std::vector<int> frozen_centers;  ///< components whose center update had a zero denominator
};

struct FitResult {
  ModelState model;
  Responsibilities resp;
  std::vector<int> labels;  ///< 0-based row argmax of resp
  double pseudo_loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationDiagnostics> trace;
  int start = 0;                      ///< index of the winning start
  std::vector<double> start_logliks;  ///< NaN for starts that failed
};

/// Delta_ik = (X_i - mu_k)^T Omega (X_i - mu_k), clamped at zero.
Matrix mahalanobis_radii(const DataMatrix& X, const Matrix& centers, const SymMatrix& omega);
Matrix mahalanobis_radii(const DataMatrix& X, const ModelState& model);

/// log pi_k + log g(Delta_ik)
Matrix log_component_scores(const Matrix& radii, const Vector& pi, const GeneratorEstimate& generator);

struct EStepResult {
  Responsibilities resp;
  Vector pi;
};

/// Row-wise softmax of the log scores; rows that are entirely -inf become uniform.
EStepResult e_step_from_scores(const Matrix& log_scores);
EStepResult e_step(const Matrix& radii, const ModelState& model);

struct CenterUpdate {
  Matrix centers;
  std::vector<int> frozen;
};

CenterUpdate center_update(const DataMatrix& X, const Responsibilities& resp, const Matrix& radii,
                           const GeneratorEstimate& generator, const Matrix& centers_prev, double eta_mu);

struct IterationResult {
  ModelState model;
  Responsibilities resp;
  IterationDiagnostics diagnostics;
};

IterationResult gem_iterate(const DataMatrix& X, const ModelState& model, const GemConfig& cfg);

/// sum_i logsumexp_k(log pi_k + log g(Delta_ik))
double pseudo_loglikelihood_from_scores(const Matrix& log_scores);
double pseudo_loglikelihood(const DataMatrix& X, const ModelState& model);

/// Omega = I, pi from the hard label shares, generator from the hard-label radii.
ModelState initial_model(const DataMatrix& X, const Matrix& centers, const Matrix& hard_resp,
                         const GeneratorConfig& gen_cfg);

/// One GEM run from a given start, including the final generator and
/// responsibility recomputation.
FitResult run_from(const DataMatrix& X, ModelState start, const GemConfig& cfg);

/// Multistart fit; the run with the largest pseudo-loglikelihood wins.
FitResult fit(const DataMatrix& X, const GemConfig& cfg);

/// Row argmax, ties to the lowest index.
std::vector<int> row_argmax(const Matrix& m);

/// Plug-in Bayes rule argmax_k log pi_k + log g(delta_k(x)).
std::vector<int> classify(const DataMatrix& X, const ModelState& model);

}  // namespace egem
