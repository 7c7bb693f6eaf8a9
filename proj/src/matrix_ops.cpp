#include "egem/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "egem/error.hpp"

namespace egem {

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    fail(ErrorCode::DimensionMismatch, "SymMatrix needs a non-empty square matrix");
  }
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(Index p) { return trusted(Matrix::Identity(p, p)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return trusted(d.asDiagonal().toDenseMatrix()); }

SymMatrix SymMatrix::trusted(Matrix a) {
  SymMatrix s;
  s.a_ = std::move(a);
  return s;
}

EigenDecomposition ordered_eigen(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  if (solver.info() != Eigen::Success) fail(ErrorCode::Numeric, "eigendecomposition failed");
  const Index p = a.dim();
  EigenDecomposition out{Vector(p), Matrix(p, p)};
  // Eigen returns ascending order.
  for (Index j = 0; j < p; ++j) {
    const Index src = p - 1 - j;
    out.values(j) = solver.eigenvalues()(src);
    auto col = solver.eigenvectors().col(src);
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < p; ++i) {
      if (std::fabs(col(i)) > best) {
        best = std::fabs(col(i));
        arg = i;
      }
    }
    out.vectors.col(j) = col(arg) < 0.0 ? Vector(-col) : Vector(col);
  }
  return out;
}

InterpCurve::InterpCurve(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size()) {
    fail(ErrorCode::InvalidArgument, "interpolation curve needs matching non-empty knots and values");
  }
  for (std::size_t m = 1; m < knots_.size(); ++m) {
    if (!(knots_[m] > knots_[m - 1])) {
      fail(ErrorCode::InvalidArgument, "interpolation knots must be strictly increasing");
    }
  }
}

double clip(double x, double lo, double hi) {
  if (lo > hi) fail(ErrorCode::InvalidRange, "clip: lower bound exceeds upper bound");
  return std::min(std::max(x, lo), hi);
}

double lin_interp(const InterpCurve& curve, double u) {
  const auto& k = curve.knots();
  const auto& v = curve.values();
  if (u <= k.front()) return v.front();
  if (u >= k.back()) return v.back();
  // first knot >= u, so u lies in (k[m-1], k[m]]
  const auto it = std::lower_bound(k.begin(), k.end(), u);
  const std::size_t m = static_cast<std::size_t>(it - k.begin());
  const double t = (u - k[m - 1]) / (k[m] - k[m - 1]);
  return v[m - 1] + t * (v[m] - v[m - 1]);
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

SymMatrix proj_pd(const SymMatrix& a, double eps_pd) {
  if (!(eps_pd > 0.0)) fail(ErrorCode::InvalidArgument, "proj_pd: eps_pd must be positive");
  if (!a.mat().allFinite()) fail(ErrorCode::Numeric, "proj_pd: non-finite entries");
  const Index p = a.dim();
  // A Cholesky factorisation of A - shift*I proves every eigenvalue already
  // clears the floor, in which case the projection is the identity map.
  const double shift = eps_pd + 1e-12 * (1.0 + max_abs(a.mat()));
  Eigen::LLT<Matrix> llt(a.mat() - shift * Matrix::Identity(p, p));
  if (llt.info() == Eigen::Success) return a;

  const EigenDecomposition eig = ordered_eigen(a);
  const Vector floored = eig.values.cwiseMax(eps_pd);
  Matrix out = eig.vectors * floored.asDiagonal() * eig.vectors.transpose();
  return SymMatrix(out);
}

SymMatrix trace_normalize(const SymMatrix& a) {
  const double tr = a.trace();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    fail(ErrorCode::DegenerateTrace, "trace_normalize: trace must be positive, got " + std::to_string(tr));
  }
  return SymMatrix::trusted(a.mat() * (static_cast<double>(a.dim()) / tr));
}

SymMatrix soft_threshold_offdiag(const SymMatrix& a, double lambda_u) {
  if (lambda_u < 0.0) fail(ErrorCode::InvalidArgument, "soft threshold must be non-negative");
  Matrix out = a.mat();
  const Index p = a.dim();
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < p; ++i) {
      if (i == j) continue;
      const double v = out(i, j);
      const double mag = std::fabs(v) - lambda_u;
      out(i, j) = mag > 0.0 ? std::copysign(mag, v) : 0.0;
    }
  }
  return SymMatrix::trusted(std::move(out));
}

SymMatrix symmetric_sqrt(const SymMatrix& a) {
  const EigenDecomposition eig = ordered_eigen(a);
  const double tol = 1e-10 * std::max(1.0, std::fabs(eig.values(0)));
  Vector root(eig.values.size());
  for (Index j = 0; j < root.size(); ++j) {
    const double l = eig.values(j);
    if (l < -tol) fail(ErrorCode::NotPsd, "symmetric_sqrt: matrix has a negative eigenvalue");
    root(j) = std::sqrt(std::max(l, 0.0));
  }
  return SymMatrix(Matrix(eig.vectors * root.asDiagonal() * eig.vectors.transpose()));
}

SymMatrix poet(const SymMatrix& a, int m, double lambda_u, double eps_pd) {
  const Index p = a.dim();
  if (m < 0 || m > p) {
    fail(ErrorCode::InvalidRank, "poet: rank " + std::to_string(m) + " outside [0, " + std::to_string(p) + "]");
  }
  Matrix low = Matrix::Zero(p, p);
  if (m > 0) {
    const EigenDecomposition eig = ordered_eigen(a);
    const auto v = eig.vectors.leftCols(m);
    low = v * eig.values.head(m).asDiagonal() * v.transpose();
  }
  const SymMatrix remainder(a.mat() - low);
  const SymMatrix thresholded = soft_threshold_offdiag(remainder, lambda_u);
  return proj_pd(SymMatrix(low + thresholded.mat()), eps_pd);
}

SymMatrix inverse_pd(const SymMatrix& a) {
  Eigen::LLT<Matrix> llt(a.mat());
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPd, "inverse_pd: matrix is not positive definite");
  const Index p = a.dim();
  return SymMatrix(Matrix(llt.solve(Matrix::Identity(p, p))));
}

}  // namespace egem
