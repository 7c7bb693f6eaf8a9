#include "egem/shape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "egem/error.hpp"

namespace egem {
namespace {

// sum_i c_i r_i r_i^T for non-negative c, lower triangle accumulated then mirrored.
Matrix weighted_outer_sum(const Matrix& rows, const Vector& c) {
  const Matrix scaled = rows.array().colwise() * c.array().sqrt();
  Matrix out = Matrix::Zero(rows.cols(), rows.cols());
  out.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  return out.selfadjointView<Eigen::Lower>();
}

}  // namespace

double StackedResiduals::effective_size() const {
  const double s2 = weights.squaredNorm();
  if (!(s2 > 0.0)) fail(ErrorCode::DegenerateWeights, "all residual weights are zero");
  const double s = weights.sum();
  return s * s / s2;
}

StackedResiduals stack_residuals(const DataMatrix& X, const Matrix& centers, const Matrix& resp) {
  const Index n = X.rows();
  const Index K = centers.rows();
  if (centers.cols() != X.cols() || resp.rows() != n || resp.cols() != K) {
    fail(ErrorCode::DimensionMismatch, "stack_residuals: inconsistent shapes");
  }
  Index count = 0;
  for (Index k = 0; k < K; ++k)
    for (Index i = 0; i < n; ++i) count += resp(i, k) > 0.0 ? 1 : 0;
  StackedResiduals out{Matrix(count, X.cols()), Vector(count)};
  Index r = 0;
  for (Index k = 0; k < K; ++k) {
    for (Index i = 0; i < n; ++i) {
      if (!(resp(i, k) > 0.0)) continue;
      out.rows.row(r) = X.row(i) - centers.row(k);
      out.weights(r) = resp(i, k);
      ++r;
    }
  }
  return out;
}

SymMatrix spatial_sign_pilot(const StackedResiduals& res, double eps_r) {
  const double total = res.total_weight();
  if (!(total > 0.0)) fail(ErrorCode::DegenerateWeights, "spatial sign pilot: weights sum to zero");
  const Vector norms = res.rows.rowwise().squaredNorm().cwiseMax(eps_r);
  const Vector c = res.weights.cwiseQuotient(norms) / total;
  return SymMatrix::trusted(weighted_outer_sum(res.rows, c));
}

int select_factor_count(const Vector& d, int M_kr) {
  const Index p = d.size();
  if (p < 3) return 0;
  // V[j] = sum_{l=j}^{p-2} d[l] in 0-based indexing (the last eigenvalue is excluded).
  Vector V = Vector::Zero(p);
  for (Index j = p - 2; j >= 0; --j) V(j) = d(j) + (j + 1 <= p - 2 ? V(j + 1) : 0.0);
  const Index upper = std::min<Index>(M_kr, p - 2);
  int best = 0;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (Index j = 0; j < upper; ++j) {
    if (!(V(j) > 0.0) || !(V(j + 1) > 0.0)) continue;
    const double num = std::log1p(d(j) / V(j));
    const double den = std::log1p(d(j + 1) / V(j + 1));
    if (!(den > 0.0)) continue;
    const double ratio = num / den;
    if (std::isfinite(ratio) && ratio > best_ratio) {
      best_ratio = ratio;
      best = static_cast<int>(j) + 1;
    }
  }
  return best;
}

int select_factor_count(const SymMatrix& H, int M_kr) {
  return select_factor_count(ordered_eigen(H).values, M_kr);
}

SymMatrix tyler_map(const StackedResiduals& res, const SymMatrix& sigma, const ShapeConfig& cfg) {
  const Index p = res.dim();
  const double total = res.total_weight();
  if (!(total > 0.0)) fail(ErrorCode::DegenerateWeights, "Tyler: weights sum to zero");
  Eigen::LLT<Matrix> llt(sigma.mat());
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPd, "Tyler: scatter iterate is not positive definite");
  const Matrix z = llt.matrixL().solve(res.rows.transpose());
  const Vector q = z.colwise().squaredNorm().transpose().cwiseMax(cfg.eps_r);
  const Vector c = (static_cast<double>(p) / total) * res.weights.cwiseQuotient(q);
  Matrix next = (1.0 - cfg.rho_T) * weighted_outer_sum(res.rows, c);
  next.diagonal().array() += cfg.rho_T;
  return proj_pd(trace_normalize(SymMatrix::trusted(std::move(next))), cfg.eps_pd);
}

TylerResult tyler_scatter(const StackedResiduals& res, const SymMatrix& init, const ShapeConfig& cfg) {
  TylerResult out{init, 0, false, 0.0};
  for (int it = 0; it < cfg.tyler_max_iter; ++it) {
    SymMatrix next = tyler_map(res, out.sigma, cfg);
    const double change = (next.mat() - out.sigma.mat()).norm() / std::max(out.sigma.mat().norm(), 1e-300);
    out.sigma = std::move(next);
    out.iterations = it + 1;
    out.last_change = change;
    if (change <= cfg.tyler_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double gaussian_profile_loglik(const SymMatrix& S, const SymMatrix& omega) {
  Eigen::LLT<Matrix> llt(omega.mat());
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPd, "profile log-likelihood: precision not PD");
  const Matrix& L = llt.matrixL().toDenseMatrix();
  const double logdet = 2.0 * L.diagonal().array().log().sum();
  return 0.5 * (logdet - (S.mat().cwiseProduct(omega.mat())).sum());
}

int edge_count(const SymMatrix& omega) {
  int df = 0;
  for (Index j = 1; j < omega.dim(); ++j)
    for (Index i = 0; i < j; ++i) df += std::fabs(omega(i, j)) > 1e-8 ? 1 : 0;
  return df;
}

EbicSelection ebic_select_precision(const SymMatrix& S_pt, double n_eff, const ShapeConfig& cfg) {
  const Index p = S_pt.dim();
  const double log_p = std::log(static_cast<double>(p));
  const double base = cfg.c_Omega * std::sqrt(log_p / n_eff);
  EbicSelection sel;
  for (double m : cfg.lambda_grid_multipliers) sel.lambdas.push_back(base * m);
  std::sort(sel.lambdas.begin(), sel.lambdas.end());
  sel.ebic.assign(sel.lambdas.size(), std::numeric_limits<double>::quiet_NaN());
  sel.df.assign(sel.lambdas.size(), -1);

  // Solved from the largest penalty down, each warm-started from the previous
  // solution; selection still scans in ascending order so ties go to the larger lambda.
  std::vector<std::optional<GlassoResult>> fits(sel.lambdas.size());
  std::string last_error;
  const GlassoResult* warm = nullptr;
  for (std::size_t g = sel.lambdas.size(); g-- > 0;) {
    try {
      fits[g] = glasso_solve(S_pt, sel.lambdas[g], cfg.glasso_tol, cfg.glasso_max_iter, warm);
      warm = &*fits[g];
    } catch (const Error& e) {
      last_error = e.what();
    }
  }
  bool found = false;
  double best = 0.0;
  for (std::size_t g = 0; g < sel.lambdas.size(); ++g) {
    if (!fits[g]) continue;
    const int df = edge_count(fits[g]->omega);
    const double ll = gaussian_profile_loglik(S_pt, fits[g]->omega);
    const double score = -n_eff * ll + std::log(n_eff) * df + 4.0 * cfg.gamma_ebic * log_p * df;
    sel.ebic[g] = score;
    sel.df[g] = df;
    if (!found || score <= best) {
      best = score;
      sel.omega = fits[g]->omega;
      sel.lambda = sel.lambdas[g];
      found = true;
    }
  }
  if (!found) fail(ErrorCode::NonConvergence, "graphical lasso failed on every grid value: " + last_error);
  return sel;
}

PrecisionUpdate update_precision(const SymMatrix& omega_prev, const SymMatrix& omega_prop, const ShapeConfig& cfg) {
  const double eta = cfg.eta_Omega;
  const SymMatrix half = proj_pd(SymMatrix(Matrix((1.0 - eta) * omega_prev.mat() + eta * omega_prop.mat())), cfg.eps_pd);
  const SymMatrix sigma = trace_normalize(proj_pd(inverse_pd(half), cfg.eps_pd));
  const SymMatrix omega = proj_pd(inverse_pd(sigma), cfg.eps_pd);
  return {omega, sigma};
}

ShapeBlockResult shape_block(const StackedResiduals& res, const SymMatrix& omega_prev, const ShapeConfig& cfg) {
  const Index p = res.dim();
  const double n_eff = res.effective_size();
  ShapeBlockResult out;
  auto& diag = out.diagnostics;

  const SymMatrix pilot = spatial_sign_pilot(res, cfg.eps_r);
  diag.factor_count = select_factor_count(pilot, cfg.M_kr);
  diag.lambda_u = cfg.c_u * std::sqrt(std::log(static_cast<double>(p)) / n_eff);
  const SymMatrix pss = poet(pilot, diag.factor_count, diag.lambda_u, cfg.eps_pd);

  const SymMatrix start = trace_normalize(proj_pd(pss, cfg.eps_pd));
  const TylerResult tyler = tyler_scatter(res, start, cfg);
  diag.tyler_iterations = tyler.iterations;
  diag.tyler_converged = tyler.converged;

  const SymMatrix pt = poet(tyler.sigma, diag.factor_count, diag.lambda_u, cfg.eps_pd);
  EbicSelection sel = ebic_select_precision(pt, n_eff, cfg);
  diag.lambda_selected = sel.lambda;

  PrecisionUpdate upd = update_precision(omega_prev, sel.omega, cfg);
  out.omega = std::move(upd.omega);
  out.sigma = std::move(upd.sigma);
  return out;
}

}  // namespace egem
