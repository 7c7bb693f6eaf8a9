#include "support.hpp"

#include <cmath>
#include <numbers>

#include "egem/error.hpp"
#include "egem/generator.hpp"
#include "egem/simdata.hpp"

using namespace egem;
using doctest::Approx;

namespace {

WeightedRadii single_column(const std::vector<double>& radii) {
  const Index n = static_cast<Index>(radii.size());
  Matrix r(n, 1);
  for (Index i = 0; i < n; ++i) r(i, 0) = radii[static_cast<std::size_t>(i)];
  return WeightedRadii::from(r, Matrix::Ones(n, 1));
}

}  // namespace

TEST_CASE("effective sample size examples") {
  CHECK(effective_sample_size(Matrix::Identity(4, 4)) == Approx(4.0));
  CHECK(effective_sample_size(Matrix::Constant(6, 3, 1.0 / 3.0)) == Approx(18.0));
  Matrix r(2, 2);
  r << 1, 0, 0.5, 0.5;
  CHECK(effective_sample_size(r) == Approx(2.6666666666666665).epsilon(1e-15));
}

TEST_CASE("plug-in bandwidth examples") {
  CHECK(plugin_bandwidth(0.0, 50.0, 1e-3) == 1e-3);
  CHECK(plugin_bandwidth(1.0, 1.0, 1e-3) == Approx(1.06));
  CHECK(plugin_bandwidth(1.0, 100.0, 1e-3) == Approx(0.42199360078670706).epsilon(1e-12));
}

TEST_CASE("weighted KDE point mass and symmetry") {
  const WeightedRadii one = single_column({std::expm1(0.8)});
  CHECK(weighted_kde(one, 0.2, 0.8) == Approx(0.3989422804014327 / 0.2));

  // Two transformed radii symmetric about 0.5.
  const WeightedRadii two = single_column({std::expm1(0.2), std::expm1(0.8)});
  const WeightedRadii left = single_column({std::expm1(0.2)});
  CHECK(weighted_kde(two, 0.1, 0.5) == Approx(weighted_kde(left, 0.1, 0.5)));
}

TEST_CASE("weighted KDE is a density") {
  CounterRng rng(3, {1});
  std::vector<double> r;
  for (int i = 0; i < 60; ++i) r.push_back(5.0 * rng.uniform());
  Matrix radii(30, 2);
  Matrix resp(30, 2);
  for (Index i = 0; i < 30; ++i) {
    radii(i, 0) = r[static_cast<std::size_t>(2 * i)];
    radii(i, 1) = r[static_cast<std::size_t>(2 * i + 1)];
    resp(i, 0) = rng.uniform();
    resp(i, 1) = 1.0 - resp(i, 0);
  }
  const WeightedRadii wr = WeightedRadii::from(radii, resp);
  const double h = plugin_bandwidth(wr, 1e-3);
  const auto [mn, mx] = std::minmax_element(wr.points.begin(), wr.points.end());
  const double lo = *mn - 8 * h;
  const double hi = *mx + 8 * h;
  const int steps = 20000;
  double integral = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const double y = lo + (hi - lo) * s / steps;
    const double f = weighted_kde(wr, h, y);
    CHECK(f >= 0.0);
    integral += (s == 0 || s == steps ? 0.5 : 1.0) * f;
  }
  integral *= (hi - lo) / steps;
  CHECK(integral == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("grid endpoints and radius floor") {
  const RadiusGrid g = build_grid(0.0, 1.0, 0.1, 3, 1e-8);
  REQUIRE(g.y.size() == 3);
  CHECK(g.y[0] == 0.0);
  CHECK(g.y[1] == Approx(0.65));
  CHECK(g.y[2] == Approx(1.3));
  CHECK(g.u[0] == 1e-8);
  CHECK(g.u[2] == Approx(std::expm1(1.3)));
}

TEST_CASE("grid ignores zero-weight points") {
  Matrix radii(3, 1);
  radii << 0.5, 1.0, 100.0;
  Matrix resp(3, 1);
  resp << 1, 1, 0;
  const WeightedRadii wr = WeightedRadii::from(radii, resp);
  const RadiusGrid g = build_grid(wr, 0.1, 10, 1e-8);
  CHECK(g.y.back() == Approx(std::log(2.0) + 0.3));
}

TEST_CASE("trapezoid normaliser for a constant density") {
  RadiusGrid g;
  for (int m = 0; m < 200; ++m) {
    const double y = 2.0 * m / 199.0;
    g.y.push_back(y);
    g.u.push_back(std::max(std::expm1(y), 1e-8));
  }
  const std::vector<double> f(200, 0.37);
  CHECK(trapezoid_normalizer(g, f) == Approx(0.7400124539606007).epsilon(1e-8));
}

TEST_CASE("raw log generator is unchanged by rescaling the density") {
  const RadiusGrid g = build_grid(0.1, 2.0, 0.2, 30, 1e-8);
  std::vector<double> f, f3;
  for (double y : g.y) {
    f.push_back(std::exp(-(y - 1) * (y - 1)));
    f3.push_back(3.0 * f.back());
  }
  const auto a = raw_log_generator(g, f, 4);
  const auto b = raw_log_generator(g, f3, 4);
  for (std::size_t m = 0; m < a.size(); ++m) CHECK(a[m] == Approx(b[m]).epsilon(1e-12));
}

TEST_CASE("Gaussian radii give a score near one half") {
  const int p = 6;
  const auto r = sample_radial(RadialSpec{RadialKind::Gaussian, 0}, p, 4000, 17);
  std::vector<double> radii;
  for (double x : r) radii.push_back(x * x);
  const GeneratorEstimate g = build_generator(single_column(radii), p, GeneratorConfig{});
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const double q1 = sorted[sorted.size() / 4];
  const double q3 = sorted[3 * sorted.size() / 4];
  for (double u = q1; u <= q3; u += (q3 - q1) / 10) {
    CHECK(g.score_at(u) > 0.35);
    CHECK(g.score_at(u) < 0.65);
  }
  CHECK(g.bandwidth() > 0.0);
  CHECK(g.y_grid().size() == 200);
}

TEST_CASE("score is the clipped negative log-generator slope") {
  const int p = 4;
  const auto r = sample_radial(RadialSpec{RadialKind::T, 5}, p, 3000, 4);
  std::vector<double> radii;
  for (double x : r) radii.push_back(x * x);
  GeneratorConfig cfg;
  const GeneratorEstimate g = build_generator(single_column(radii), p, cfg);
  const auto& y = g.y_grid();
  const auto& lg = g.log_g();
  for (std::size_t m = 20; m + 20 < y.size(); m += 10) {
    // Central difference of the fitted values approximates the spline slope at a knot.
    const double dy = (lg[m + 1] - lg[m - 1]) / (y[m + 1] - y[m - 1]);
    const double expect = clip(-dy / (1.0 + g.u_grid()[m]), cfg.omega_min, cfg.omega_max);
    CHECK(g.score()[m] == Approx(expect).epsilon(0.05).scale(1e-2));
  }
  for (double s : g.score()) {
    CHECK(s >= cfg.omega_min);
    CHECK(s <= cfg.omega_max);
  }
}

TEST_CASE("generator rejects mismatched grids") {
  CHECK_THROWS_AS(GeneratorEstimate({}, {}, {}, {}, 1.0), Error);
  CHECK_THROWS_AS(WeightedRadii::from(Matrix::Ones(2, 2), Matrix::Zero(2, 2)), Error);
}
