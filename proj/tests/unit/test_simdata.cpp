#include "support.hpp"

#include <cmath>

#include "egem/error.hpp"
#include "egem/simdata.hpp"

using namespace egem;
using doctest::Approx;

TEST_CASE("scatter builders") {
  const SymMatrix ar = build_scatter(ScatterSpec{ScatterKind::AR, 0.5}, 2);
  CHECK(ar(0, 1) == 0.5);
  CHECK(ar(0, 0) == 1.0);
  CHECK(build_scatter(ScatterSpec{ScatterKind::AR, 0.5}, 5)(0, 4) == Approx(0.0625));
  const SymMatrix cs = build_scatter(ScatterSpec{ScatterKind::CS, 0}, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) CHECK(cs(i, j) == (i == j ? 1.0 : 0.5));
  CHECK(build_scatter(ScatterSpec{ScatterKind::AR, 0.0}, 4).mat().isIdentity());
  CHECK_THROWS_AS(build_scatter(ScatterSpec{ScatterKind::AR, 1.0}, 4), Error);
}

TEST_CASE("mean builders") {
  const Matrix s = build_means(MeanKind::Sparse, 10, 3, 1.5);
  const double mu1[10] = {1.5, 1.5, 1.5, 0, 0, 0, 0, 0, 0, 0};
  for (Index j = 0; j < 10; ++j) CHECK(s(0, j) == mu1[j]);
  CHECK(s.rightCols(4).isZero());

  const Matrix d = build_means(MeanKind::DenseBlock, 8, 3, 0.4);
  const double row[8] = {1.5, 1.5, 0.5, 0.5, -0.5, -0.5, -1.5, -1.5};
  for (Index j = 0; j < 8; ++j) CHECK(d(0, j) == Approx(0.4 * row[j]));

  CHECK(build_means(MeanKind::Sparse, 10, 3, 0.0).isZero());
  CHECK_THROWS_AS(build_means(MeanKind::DenseBlock, 10, 3, 1.0), Error);
  CHECK_THROWS_AS(build_means(MeanKind::Sparse, 5, 3, 1.0), Error);
}

TEST_CASE("second moment of every radial law is the dimension") {
  const int p = 10;
  const std::vector<RadialSpec> laws{
      {RadialKind::Gaussian, 0}, {RadialKind::T, 5}, {RadialKind::Laplace, 0}, {RadialKind::Slash, 4}};
  for (const auto& law : laws) {
    const auto r = sample_radial(law, p, 100000, 91);
    double m = 0.0;
    for (double x : r) m += x * x;
    m /= static_cast<double>(r.size());
    INFO(radial_name(law));
    CHECK(std::abs(m - p) <= 0.1 * p);
  }
  const auto g = sample_radial(RadialSpec{RadialKind::Gaussian, 0}, p, 100000, 92);
  double m = 0.0;
  for (double x : g) m += x * x;
  m /= 1e5;
  CHECK(std::abs(m - p) <= 3.0 * std::sqrt(2.0 * p / 1e5) * std::sqrt(p));
}

TEST_CASE("zero radius places every row on its center") {
  SimDesign d;
  d.n = 30;
  d.p = 12;
  d.zero_radius = true;
  const auto s = sample_mixture(d);
  const Matrix mu = build_means(d.mean_kind, d.p, d.K, d.delta);
  for (Index i = 0; i < 30; ++i) CHECK(s.X.row(i) == mu.row(s.labels[static_cast<std::size_t>(i)]));
}

TEST_CASE("Gaussian single cluster reproduces the scatter") {
  SimDesign d;
  d.n = 10000;
  d.p = 5;
  d.K = 1;
  d.radial = RadialSpec{RadialKind::Gaussian, 0};
  d.mean_kind = MeanKind::Sparse;
  d.p = 6;
  d.seed = 4;
  const auto s = sample_mixture(d);
  const Matrix c = s.X.rowwise() - s.X.colwise().mean();
  const Matrix cov = c.transpose() * c / static_cast<double>(d.n);
  CHECK(max_abs(cov - build_scatter(d.scatter, d.p).mat()) < 0.1);
}

TEST_CASE("well separated Gaussian mixture is classified by nearest center") {
  SimDesign d;
  d.n = 3000;
  d.p = 12;
  d.delta = 20;
  d.radial = RadialSpec{RadialKind::Gaussian, 0};
  const auto s = sample_mixture(d);
  const Matrix mu = build_means(d.mean_kind, d.p, d.K, d.delta);
  int hit = 0;
  for (Index i = 0; i < d.n; ++i) {
    Index arg = 0;
    (mu.rowwise() - s.X.row(i)).rowwise().squaredNorm().minCoeff(&arg);
    hit += arg == s.labels[static_cast<std::size_t>(i)];
  }
  CHECK(hit / 3000.0 >= 0.999);
}

TEST_CASE("sampling is reproducible and label shares are balanced") {
  SimDesign d;
  d.n = 3000;
  d.p = 8;
  d.seed = 17;
  const auto a = sample_mixture(d);
  const auto b = sample_mixture(d);
  CHECK(a.X == b.X);
  std::vector<int> counts(3, 0);
  for (int l : a.labels) ++counts[static_cast<std::size_t>(l)];
  for (int c : counts) CHECK(std::abs(c - 1000) < 120);
}

TEST_CASE("radial names parse both ways") {
  CHECK(parse_radial("gaussian").kind == RadialKind::Gaussian);
  CHECK(parse_radial("t5").nu == 5.0);
  CHECK(parse_radial("t3.5").nu == 3.5);
  CHECK(parse_radial("laplace").kind == RadialKind::Laplace);
  CHECK(parse_radial("slash").nu == 4.0);
  CHECK(parse_radial(radial_name(RadialSpec{RadialKind::Slash, 6})).nu == 6.0);
  CHECK_THROWS_AS(parse_radial("cauchy"), Error);
  CHECK_THROWS_AS(parse_radial("t2"), Error);
}

TEST_CASE("design validation") {
  SimDesign d;
  d.delta = 0;
  CHECK_THROWS_AS(d.validate(), Error);
  d.delta = 1;
  d.n = 0;
  CHECK_THROWS_AS(d.validate(), Error);
}
