#pragma once

#include <Eigen/Dense>
#include <vector>

namespace egem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense symmetric p x p matrix. Construction from a general square matrix
/// stores (A + A^T) / 2.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(Index p);
  static SymMatrix diagonal(const Vector& d);
  /// Wraps a matrix the caller guarantees is already exactly symmetric.
  static SymMatrix trusted(Matrix a);

  Index dim() const noexcept { return a_.rows(); }
  const Matrix& mat() const noexcept { return a_; }
  double operator()(Index i, Index j) const { return a_(i, j); }
  double trace() const { return a_.trace(); }

 private:
  Matrix a_;
};

/// Ordered eigendecomposition: values descending, each eigenvector's
/// largest-magnitude entry positive (ties to the lowest index).
struct EigenDecomposition {
  Vector values;
  Matrix vectors;  ///< column j pairs with values(j)
};

EigenDecomposition ordered_eigen(const SymMatrix& a);

/// Knots strictly increasing, one value per knot.
class InterpCurve {
 public:
  InterpCurve() = default;
  InterpCurve(std::vector<double> knots, std::vector<double> values);

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return knots_.size(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

double clip(double x, double lo, double hi);

/// Piecewise-linear on the interior, constant beyond the first and last knot.
double lin_interp(const InterpCurve& curve, double u);

SymMatrix proj_pd(const SymMatrix& a, double eps_pd);
SymMatrix trace_normalize(const SymMatrix& a);
SymMatrix soft_threshold_offdiag(const SymMatrix& a, double lambda_u);
SymMatrix symmetric_sqrt(const SymMatrix& a);

/// Low-rank part from the top m eigenpairs, soft-thresholded remainder, PD projection.
SymMatrix poet(const SymMatrix& a, int m, double lambda_u, double eps_pd);

/// Inverse of a positive-definite matrix via Cholesky; throws NotPd otherwise.
SymMatrix inverse_pd(const SymMatrix& a);

double max_abs(const Matrix& a);

}  // namespace egem
