#include "egem/smoothing_spline.hpp"

#include <algorithm>
#include <cmath>

#include "egem/error.hpp"

namespace egem {
namespace {

// Solves a symmetric positive-definite pentadiagonal system in place by banded
// LDL^T. d0 main diagonal, d1 first and d2 second super-diagonal.
std::vector<double> solve_pentadiagonal(std::vector<double> d0, std::vector<double> d1, std::vector<double> d2,
                                        std::vector<double> rhs) {
  const std::size_t n = d0.size();
  // L has unit diagonal with sub-diagonals l1, l2; D is diag(d0) after the loop.
  std::vector<double> l1(n, 0.0), l2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double di = d0[i];
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d0[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d0[i - 2];
    if (!(di > 0.0)) fail(ErrorCode::Numeric, "smoothing spline system is not positive definite");
    d0[i] = di;
    if (i + 1 < n) {
      double e = d1[i];
      if (i >= 1) e -= l1[i - 1] * l2[i - 1] * d0[i - 1];
      l1[i] = e / di;
    }
    if (i + 2 < n) l2[i] = d2[i] / di;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) rhs[i] -= l1[i - 1] * rhs[i - 1];
    if (i >= 2) rhs[i] -= l2[i - 2] * rhs[i - 2];
  }
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= d0[i];
  for (std::size_t k = n; k-- > 0;) {
    if (k + 1 < n) rhs[k] -= l1[k] * rhs[k + 1];
    if (k + 2 < n) rhs[k] -= l2[k] * rhs[k + 2];
  }
  return rhs;
}

SplineFit least_squares_line(std::span<const double> y, std::span<const double> v) {
  const auto n = static_cast<double>(y.size());
  double my = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    my += y[i];
    mv += v[i];
  }
  my /= n;
  mv /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sxy += (y[i] - my) * (v[i] - mv);
    sxx += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  std::vector<double> fitted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) fitted[i] = mv + slope * (y[i] - my);
  return SplineFit({y.begin(), y.end()}, std::move(fitted), std::vector<double>(y.size(), 0.0));
}

}  // namespace

SplineFit::SplineFit(std::vector<double> knots, std::vector<double> values, std::vector<double> second_derivs)
    : knots_(std::move(knots)), values_(std::move(values)), second_(std::move(second_derivs)) {}

std::size_t SplineFit::interval(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(i, knots_.size() - 2);
}

double SplineFit::value(double t) const {
  if (knots_.size() == 1) return values_[0];
  if (t <= knots_.front()) return values_.front() + derivative(knots_.front()) * (t - knots_.front());
  if (t >= knots_.back()) return values_.back() + derivative(knots_.back()) * (t - knots_.back());
  const std::size_t i = interval(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * h * h / 6.0;
}

double SplineFit::derivative(double t) const {
  if (knots_.size() == 1) return 0.0;
  t = std::clamp(t, knots_.front(), knots_.back());
  const std::size_t i = interval(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  return (values_[i + 1] - values_[i]) / h +
         (-(3.0 * a * a - 1.0) * second_[i] + (3.0 * b * b - 1.0) * second_[i + 1]) * h / 6.0;
}

std::vector<double> SplineFit::knot_derivatives() const {
  std::vector<double> out(knots_.size());
  for (std::size_t m = 0; m < knots_.size(); ++m) out[m] = derivative(knots_[m]);
  return out;
}

SplineFit smoothing_spline(std::span<const double> y, std::span<const double> v, double lambda) {
  if (y.size() != v.size()) fail(ErrorCode::DimensionMismatch, "smoothing spline: length mismatch");
  if (y.empty()) fail(ErrorCode::InvalidArgument, "smoothing spline: no data");
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "smoothing spline: lambda must be positive");
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (!(y[i] > y[i - 1])) fail(ErrorCode::InvalidArgument, "smoothing spline: knots must be strictly increasing");
  }
  if (y.size() < 4) return least_squares_line(y, v);

  const std::size_t n = y.size();
  const std::size_t m = n - 2;  // interior knots
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = y[i + 1] - y[i];

  // Column c of Q (c = 0..m-1) has entries at rows c, c+1, c+2.
  std::vector<double> qa(m), qb(m), qc(m);
  for (std::size_t c = 0; c < m; ++c) {
    qa[c] = 1.0 / h[c];
    qb[c] = -1.0 / h[c] - 1.0 / h[c + 1];
    qc[c] = 1.0 / h[c + 1];
  }
  // (R / lambda + Q^T Q) gamma' = Q^T v, with gamma' = lambda * gamma. This
  // scaling stays well conditioned at both extremes of lambda.
  std::vector<double> d0(m), d1(m, 0.0), d2(m, 0.0), rhs(m);
  for (std::size_t c = 0; c < m; ++c) {
    d0[c] = (h[c] + h[c + 1]) / (3.0 * lambda) + qa[c] * qa[c] + qb[c] * qb[c] + qc[c] * qc[c];
    if (c + 1 < m) d1[c] = h[c + 1] / (6.0 * lambda) + qb[c] * qa[c + 1] + qc[c] * qb[c + 1];
    if (c + 2 < m) d2[c] = qc[c] * qa[c + 2];
    rhs[c] = qa[c] * v[c] + qb[c] * v[c + 1] + qc[c] * v[c + 2];
  }
  const std::vector<double> gp = solve_pentadiagonal(std::move(d0), std::move(d1), std::move(d2), std::move(rhs));

  std::vector<double> fitted(v.begin(), v.end());
  std::vector<double> second(n, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    fitted[c] -= qa[c] * gp[c];
    fitted[c + 1] -= qb[c] * gp[c];
    fitted[c + 2] -= qc[c] * gp[c];
    second[c + 1] = gp[c] / lambda;
  }
  return SplineFit({y.begin(), y.end()}, std::move(fitted), std::move(second));
}

}  // namespace egem
