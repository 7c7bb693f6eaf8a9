#include <cmath>
#include <string>

#include "egem/error.hpp"
#include "egem/shape.hpp"

namespace egem {
namespace {

double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Coordinate descent on 0.5 b^T W11 b - s12^T b + lambda |b|_1 where W11 is W
// with row and column j removed. g holds W b over all p rows (entry j unused).
void lasso_column(const Matrix& W, const Matrix& S, Index j, double lambda, double tol, Vector& beta, Vector& g) {
  const Index p = W.rows();
  g.setZero();
  for (Index l = 0; l < p; ++l)
    if (l != j && beta(l) != 0.0) g.noalias() += beta(l) * W.col(l);
  for (int pass = 0; pass < 10000; ++pass) {
    double max_change = 0.0;
    for (Index l = 0; l < p; ++l) {
      if (l == j) continue;
      const double wll = W(l, l);
      const double r = S(l, j) - (g(l) - wll * beta(l));
      const double updated = soft(r, lambda) / wll;
      const double delta = updated - beta(l);
      if (delta != 0.0) {
        g.noalias() += delta * W.col(l);
        beta(l) = updated;
        max_change = std::max(max_change, std::fabs(delta) * wll);
      }
    }
    if (max_change <= tol) return;
  }
}

}  // namespace

GlassoResult glasso_solve(const SymMatrix& S, double lambda, double tol, int max_iter, const GlassoResult* warm) {
  const Index p = S.dim();
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail(ErrorCode::InvalidArgument, "glasso: lambda must be finite and >= 0");
  if (!(tol > 0.0) || max_iter < 1) fail(ErrorCode::InvalidArgument, "glasso: tol > 0 and max_iter >= 1 required");
  for (Index j = 0; j < p; ++j)
    if (!(S(j, j) > 0.0)) fail(ErrorCode::NotPd, "glasso: covariance diagonal must be positive");

  if (lambda == 0.0) return {inverse_pd(S), S, 0};

  Matrix W = S.mat();
  Matrix B = Matrix::Zero(p, p);  // column j: regression coefficients for variable j
  if (warm != nullptr) {
    if (warm->omega.dim() != p || warm->covariance.dim() != p) fail(ErrorCode::DimensionMismatch, "glasso: warm start size");
    W = warm->covariance.mat();
    W.diagonal() = S.mat().diagonal();
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < p; ++i)
        if (i != j) B(i, j) = -warm->omega(i, j) / warm->omega(j, j);
  }
  Vector g(p);
  double scale = 0.0;
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < p; ++i)
      if (i != j) scale += std::fabs(S(i, j));
  scale = p > 1 ? scale / static_cast<double>(p * (p - 1)) : 0.0;
  const double threshold = tol * (scale > 0.0 ? scale : 1.0);
  const double inner_tol = threshold * 0.1;

  int sweeps = 0;
  bool converged = p == 1;
  while (!converged) {
    if (sweeps >= max_iter) {
      fail(ErrorCode::NonConvergence, "glasso: no convergence after " + std::to_string(max_iter) + " sweeps");
    }
    ++sweeps;
    double total_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      Vector beta = B.col(j);
      lasso_column(W, S.mat(), j, lambda, inner_tol, beta, g);
      B.col(j) = beta;
      for (Index i = 0; i < p; ++i) {
        if (i == j) continue;
        total_change += std::fabs(g(i) - W(i, j));
        W(i, j) = g(i);
        W(j, i) = g(i);
      }
    }
    const double mean_change = total_change / static_cast<double>(p * (p - 1));
    converged = mean_change <= threshold;
  }

  Matrix omega = Matrix::Zero(p, p);
  for (Index j = 0; j < p; ++j) {
    double w12b = 0.0;
    for (Index i = 0; i < p; ++i)
      if (i != j) w12b += W(i, j) * B(i, j);
    const double denom = W(j, j) - w12b;
    if (!(denom > 0.0)) fail(ErrorCode::Numeric, "glasso: non-positive Schur complement");
    const double ojj = 1.0 / denom;
    omega(j, j) = ojj;
    for (Index i = 0; i < p; ++i)
      if (i != j) omega(i, j) = -B(i, j) * ojj;
  }
  return {SymMatrix(omega), SymMatrix(W), sweeps};
}

}  // namespace egem
