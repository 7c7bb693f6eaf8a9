#pragma once

#include <span>
#include <vector>

namespace egem {

/// Natural cubic spline in value / second-derivative form.
class SplineFit {
 public:
  SplineFit() = default;
  SplineFit(std::vector<double> knots, std::vector<double> values, std::vector<double> second_derivs);

  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& fitted() const noexcept { return values_; }
  const std::vector<double>& second_derivatives() const noexcept { return second_; }
  /// First derivative at each knot (one-sided at the two ends).
  std::vector<double> knot_derivatives() const;

  /// Evaluation anywhere; linear extrapolation beyond the end knots.
  double value(double t) const;
  double derivative(double t) const;

 private:
  std::size_t interval(double t) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;
};

/// Minimiser of sum (v_m - f(y_m))^2 + lambda * int f''(t)^2 dt over natural
/// cubic splines with knots at y (Reinsch). With fewer than four points the
/// ordinary least-squares line is returned.
SplineFit smoothing_spline(std::span<const double> y, std::span<const double> v, double lambda);

}  // namespace egem
