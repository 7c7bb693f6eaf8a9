#pragma once

#include <vector>

#include "egem/config.hpp"
#include "egem/data.hpp"
#include "egem/matrix_ops.hpp"

namespace egem {

/// Residuals X_i - mu_k stacked over (i, k) with their responsibilities.
/// Entries with zero responsibility contribute nothing and are not stored.
struct StackedResiduals {
  Matrix rows;     ///< N x p
  Vector weights;  ///< N, unnormalised responsibilities

  Index dim() const noexcept { return rows.cols(); }
  double total_weight() const { return weights.sum(); }
  /// (sum w)^2 / sum w^2
  double effective_size() const;
};

StackedResiduals stack_residuals(const DataMatrix& X, const Matrix& centers, const Matrix& resp);

/// sum w r r^T / max(|r|^2, eps_r) / sum w
SymMatrix spatial_sign_pilot(const StackedResiduals& res, double eps_r);

/// Eigenvalue-ratio factor count from descending eigenvalues. Returns 0 when
/// p < 3 or no ratio is defined.
int select_factor_count(const Vector& eigenvalues_desc, int M_kr);
int select_factor_count(const SymMatrix& H, int M_kr);

/// One application of the ridge-regularised weighted Tyler map.
SymMatrix tyler_map(const StackedResiduals& res, const SymMatrix& sigma, const ShapeConfig& cfg);

struct TylerResult {
  SymMatrix sigma;
  int iterations = 0;
  bool converged = false;
  double last_change = 0.0;  ///< relative Frobenius change of the final step
};

TylerResult tyler_scatter(const StackedResiduals& res, const SymMatrix& init, const ShapeConfig& cfg);

struct GlassoResult {
  SymMatrix omega;
  SymMatrix covariance;  ///< working covariance W at termination
  int iterations = 0;
};

/// Graphical lasso with an unpenalised diagonal:
/// argmin tr(Omega S) - log det Omega + lambda * |off(Omega)|_1.
/// `warm` seeds the working covariance and regressions from another solution.
GlassoResult glasso_solve(const SymMatrix& S, double lambda, double tol, int max_iter,
                          const GlassoResult* warm = nullptr);

/// Per-observation Gaussian profile log-likelihood 0.5 (log det Omega - tr(S Omega)).
double gaussian_profile_loglik(const SymMatrix& S, const SymMatrix& omega);

/// Strictly upper-triangular entries with magnitude above 1e-8.
int edge_count(const SymMatrix& omega);

struct EbicSelection {
  SymMatrix omega;
  double lambda = 0.0;
  std::vector<double> lambdas;  ///< ascending
  std::vector<double> ebic;     ///< NaN where the solve failed
  std::vector<int> df;
};

EbicSelection ebic_select_precision(const SymMatrix& S_pt, double n_eff, const ShapeConfig& cfg);

struct PrecisionUpdate {
  SymMatrix omega;
  SymMatrix sigma;
};

/// Damped blend, PD projection, trace normalisation of the inverse, re-inversion.
PrecisionUpdate update_precision(const SymMatrix& omega_prev, const SymMatrix& omega_prop, const ShapeConfig& cfg);

struct ShapeDiagnostics {
  int factor_count = 0;
  double lambda_u = 0.0;
  double lambda_selected = 0.0;
  int tyler_iterations = 0;
  bool tyler_converged = false;
};

struct ShapeBlockResult {
  SymMatrix omega;
  SymMatrix sigma;
  ShapeDiagnostics diagnostics;
};

/// Sign pilot, factor count, POET, Tyler, POET, EBIC graphical lasso, damped update.
ShapeBlockResult shape_block(const StackedResiduals& res, const SymMatrix& omega_prev, const ShapeConfig& cfg);

}  // namespace egem
