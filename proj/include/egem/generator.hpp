#pragma once

#include <span>
#include <vector>

#include "egem/config.hpp"
#include "egem/matrix_ops.hpp"
#include "egem/smoothing_spline.hpp"

namespace egem {

/// Stacked radii Delta_ik, their transforms log(1 + Delta_ik) and the
/// normalised responsibility weights.
struct WeightedRadii {
  Matrix radii;        ///< n x K
  Matrix transformed;  ///< n x K
  Matrix weights;      ///< n x K, sums to one
  double n_eff = 0.0;
  /// Positive-weight entries only, stacked, for the density sums.
  std::vector<double> points;
  std::vector<double> point_weights;

  static WeightedRadii from(const Matrix& radii, const Matrix& resp);
};

/// (sum tau)^2 / sum tau^2; equals n^2 / sum tau^2 for row-stochastic input.
double effective_sample_size(const Matrix& resp);

double weighted_sd(const WeightedRadii& wr);

/// max(h_min, 1.06 * sigma_Y * n_eff^(-1/5))
double plugin_bandwidth(const WeightedRadii& wr, double h_min);
double plugin_bandwidth(double sigma_y, double n_eff, double h_min);

/// Weighted Gaussian KDE of the transformed radii at y.
double weighted_kde(const WeightedRadii& wr, double h, double y);

struct RadiusGrid {
  std::vector<double> y;  ///< equally spaced transformed radii
  std::vector<double> u;  ///< max(exp(y) - 1, eps_u)
};

/// Equally spaced on [max(0, min Y - 3h), max Y + 3h] over positive-weight points.
RadiusGrid build_grid(const WeightedRadii& wr, double h, int M, double eps_u);
RadiusGrid build_grid(double y_min, double y_max, double h, int M, double eps_u);

/// Trapezoid rule for int f(log(1+u)) / (1+u) du over the radius grid, given
/// the density values at the grid's transformed radii.
double trapezoid_normalizer(const RadiusGrid& grid, std::span<const double> density);

/// (1 - p/2) log u_m + log f(y_m) - log(1 + u_m) - log C, densities floored before the log.
std::vector<double> raw_log_generator(const WeightedRadii& wr, double h, const RadiusGrid& grid, int p,
                                      double density_floor = 1e-300);
std::vector<double> raw_log_generator(const RadiusGrid& grid, std::span<const double> density, int p,
                                      double density_floor = 1e-300);

/// Smoothed log-generator and clipped radial score on a radius grid, extended
/// to all radii by linear interpolation.
class GeneratorEstimate {
 public:
  GeneratorEstimate() = default;
  GeneratorEstimate(std::vector<double> y_grid, std::vector<double> u_grid, std::vector<double> log_g,
                    std::vector<double> score, double bandwidth);

  const std::vector<double>& y_grid() const noexcept { return y_; }
  const std::vector<double>& u_grid() const noexcept { return u_; }
  const std::vector<double>& log_g() const noexcept { return log_g_; }
  const std::vector<double>& score() const noexcept { return score_; }
  double bandwidth() const noexcept { return bandwidth_; }
  bool empty() const noexcept { return u_.empty(); }

  double log_g_at(double u) const { return lin_interp(log_curve_, u); }
  double score_at(double u) const { return lin_interp(score_curve_, u); }

 private:
  std::vector<double> y_, u_, log_g_, score_;
  double bandwidth_ = 0.0;
  InterpCurve log_curve_, score_curve_;
};

/// Bandwidth, grid, raw log-generator, smoothing spline on the [0,1]-rescaled
/// transformed axis, clipped score.
GeneratorEstimate build_generator(const WeightedRadii& wr, int p, const GeneratorConfig& cfg);

}  // namespace egem
