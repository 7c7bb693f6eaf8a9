#include "egem/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "egem/error.hpp"
#include "egem/simd/kernels.hpp"

namespace egem {

WeightedRadii WeightedRadii::from(const Matrix& radii, const Matrix& resp) {
  if (radii.rows() != resp.rows() || radii.cols() != resp.cols()) {
    fail(ErrorCode::DimensionMismatch, "radii and responsibilities differ in shape");
  }
  const double total = resp.sum();
  if (!(total > 0.0)) fail(ErrorCode::DegenerateWeights, "responsibilities sum to zero");
  WeightedRadii wr;
  wr.radii = radii.cwiseMax(0.0);
  wr.transformed = wr.radii.array().log1p().matrix();
  wr.weights = resp / total;
  wr.n_eff = effective_sample_size(resp);
  for (Index k = 0; k < radii.cols(); ++k) {
    for (Index i = 0; i < radii.rows(); ++i) {
      const double w = wr.weights(i, k);
      if (w > 0.0) {
        wr.points.push_back(wr.transformed(i, k));
        wr.point_weights.push_back(w);
      }
    }
  }
  return wr;
}

double effective_sample_size(const Matrix& resp) {
  const double s = resp.sum();
  const double s2 = resp.squaredNorm();
  if (!(s2 > 0.0)) fail(ErrorCode::DegenerateWeights, "responsibilities are all zero");
  return s * s / s2;
}

double weighted_sd(const WeightedRadii& wr) {
  double mean = 0.0;
  for (std::size_t i = 0; i < wr.points.size(); ++i) mean += wr.point_weights[i] * wr.points[i];
  double var = 0.0;
  for (std::size_t i = 0; i < wr.points.size(); ++i) {
    const double d = wr.points[i] - mean;
    var += wr.point_weights[i] * d * d;
  }
  return std::sqrt(std::max(var, 0.0));
}

double plugin_bandwidth(double sigma_y, double n_eff, double h_min) {
  if (!(h_min > 0.0)) fail(ErrorCode::InvalidArgument, "h_min must be positive");
  return std::max(h_min, 1.06 * sigma_y * std::pow(n_eff, -0.2));
}

double plugin_bandwidth(const WeightedRadii& wr, double h_min) {
  return plugin_bandwidth(weighted_sd(wr), wr.n_eff, h_min);
}

double weighted_kde(const WeightedRadii& wr, double h, double y) {
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "bandwidth must be positive");
  const double s = simd::kernels().gaussian_sum(wr.points.data(), wr.point_weights.data(), wr.points.size(), y,
                                                 1.0 / h);
  return s * std::numbers::inv_sqrtpi / std::numbers::sqrt2 / h;
}

RadiusGrid build_grid(double y_min, double y_max, double h, int M, double eps_u) {
  if (M < 2) fail(ErrorCode::InvalidArgument, "grid needs at least two points");
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "bandwidth must be positive");
  const double lo = std::max(0.0, y_min - 3.0 * h);
  const double hi = y_max + 3.0 * h;
  RadiusGrid g;
  g.y.resize(static_cast<std::size_t>(M));
  g.u.resize(static_cast<std::size_t>(M));
  const double step = (hi - lo) / (M - 1);
  for (int m = 0; m < M; ++m) {
    const double y = m == M - 1 ? hi : lo + step * m;
    g.y[static_cast<std::size_t>(m)] = y;
    g.u[static_cast<std::size_t>(m)] = std::max(std::expm1(y), eps_u);
  }
  return g;
}

RadiusGrid build_grid(const WeightedRadii& wr, double h, int M, double eps_u) {
  if (wr.points.empty()) fail(ErrorCode::DegenerateWeights, "no positively weighted radii");
  const auto [mn, mx] = std::minmax_element(wr.points.begin(), wr.points.end());
  return build_grid(*mn, *mx, h, M, eps_u);
}

double trapezoid_normalizer(const RadiusGrid& grid, std::span<const double> density) {
  double c = 0.0;
  for (std::size_t m = 1; m < grid.u.size(); ++m) {
    c += 0.5 * (grid.u[m] - grid.u[m - 1]) * (density[m] / (1.0 + grid.u[m]) + density[m - 1] / (1.0 + grid.u[m - 1]));
  }
  return c;
}

std::vector<double> raw_log_generator(const RadiusGrid& grid, std::span<const double> density, int p,
                                      double density_floor) {
  if (density.size() != grid.y.size()) fail(ErrorCode::DimensionMismatch, "density length differs from grid");
  const double c = std::max(trapezoid_normalizer(grid, density), density_floor);
  const double log_c = std::log(c);
  std::vector<double> out(grid.y.size());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const double u = grid.u[m];
    out[m] = (1.0 - 0.5 * p) * std::log(u) + std::log(std::max(density[m], density_floor)) - std::log1p(u) - log_c;
  }
  return out;
}

std::vector<double> raw_log_generator(const WeightedRadii& wr, double h, const RadiusGrid& grid, int p,
                                      double density_floor) {
  std::vector<double> f(grid.y.size());
  for (std::size_t m = 0; m < f.size(); ++m) f[m] = weighted_kde(wr, h, grid.y[m]);
  return raw_log_generator(grid, f, p, density_floor);
}

GeneratorEstimate::GeneratorEstimate(std::vector<double> y_grid, std::vector<double> u_grid,
                                     std::vector<double> log_g, std::vector<double> score, double bandwidth)
    : y_(std::move(y_grid)), u_(std::move(u_grid)), log_g_(std::move(log_g)), score_(std::move(score)),
      bandwidth_(bandwidth) {
  if (u_.empty() || u_.size() != log_g_.size() || u_.size() != score_.size() || u_.size() != y_.size()) {
    fail(ErrorCode::InvalidArgument, "generator grids must be non-empty and of equal length");
  }
  // The radius floor can collapse leading grid points; interpolate over distinct radii.
  std::vector<double> knots, lv, sv;
  for (std::size_t m = 0; m < u_.size(); ++m) {
    if (!knots.empty() && !(u_[m] > knots.back())) continue;
    knots.push_back(u_[m]);
    lv.push_back(log_g_[m]);
    sv.push_back(score_[m]);
  }
  log_curve_ = InterpCurve(knots, std::move(lv));
  score_curve_ = InterpCurve(std::move(knots), std::move(sv));
}

GeneratorEstimate build_generator(const WeightedRadii& wr, int p, const GeneratorConfig& cfg) {
  cfg.validate();
  if (p < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  const double h = plugin_bandwidth(wr, cfg.h_min);
  RadiusGrid grid = build_grid(wr, h, cfg.grid_size, cfg.eps_u);
  const std::vector<double> raw = raw_log_generator(wr, h, grid, p, cfg.density_floor);

  const double y0 = grid.y.front();
  const double range = grid.y.back() - y0;
  std::vector<double> t(grid.y.size());
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = (grid.y[m] - y0) / range;
  const SplineFit fit = smoothing_spline(t, raw, cfg.lambda_sp);
  const std::vector<double> dt = fit.knot_derivatives();

  std::vector<double> score(grid.y.size());
  for (std::size_t m = 0; m < score.size(); ++m) {
    const double d = dt[m] / range;  // d log g / dy
    score[m] = clip(-d / (1.0 + grid.u[m]), cfg.omega_min, cfg.omega_max);
  }
  return GeneratorEstimate(std::move(grid.y), std::move(grid.u), fit.fitted(), std::move(score), h);
}

}  // namespace egem
