#include "support.hpp"

#include <cmath>

#include "egem/error.hpp"
#include "egem/gem.hpp"
#include "egem/simdata.hpp"
#include "egem/sparse_kmedian.hpp"

using namespace egem;
using doctest::Approx;

namespace {

/// Generator with log g(u) = -u / 2 and constant score 1/2 on [0, 50].
GeneratorEstimate gaussian_generator(double shift = 0.0) {
  std::vector<double> y, u, lg, sc;
  for (int m = 0; m < 50; ++m) {
    const double uu = m;
    y.push_back(std::log1p(uu));
    u.push_back(std::max(uu, 1e-8));
    lg.push_back(-0.5 * uu + shift);
    sc.push_back(0.5);
  }
  return GeneratorEstimate(y, u, lg, sc, 0.1);
}

ModelState simple_model(const Matrix& centers) {
  ModelState m;
  m.centers = centers;
  m.pi = Vector::Constant(centers.rows(), 1.0 / static_cast<double>(centers.rows()));
  m.omega = SymMatrix::identity(centers.cols());
  m.sigma = SymMatrix::identity(centers.cols());
  m.generator = gaussian_generator();
  return m;
}

SimSample small_design(std::uint64_t seed, int p = 12, int n = 120) {
  SimDesign d;
  d.n = n;
  d.p = p;
  d.delta = 2.0;
  d.seed = seed;
  return sample_mixture(d);
}

}  // namespace

TEST_CASE("Mahalanobis radii examples") {
  Matrix X(1, 2);
  X << 1, 1;
  Vector d(2);
  d << 1, 4;
  const Matrix r = mahalanobis_radii(X, Matrix::Zero(1, 2), SymMatrix::diagonal(d));
  CHECK(r(0, 0) == Approx(5.0));

  const Matrix C = test::random_matrix(3, 4, 1);
  const Matrix id = mahalanobis_radii(C, C, SymMatrix::identity(4));
  for (Index k = 0; k < 3; ++k) {
    CHECK(id(k, k) == 0.0);
    for (Index j = 0; j < 3; ++j) CHECK(id(k, j) == Approx((C.row(k) - C.row(j)).squaredNorm()));
  }
}

TEST_CASE("E-step examples") {
  Matrix s(1, 2);
  s << std::log(0.5) + std::log(3.0), std::log(0.5);
  const auto e = e_step_from_scores(s);
  CHECK(e.resp(0, 0) == Approx(0.75).epsilon(1e-15));
  CHECK(e.resp(0, 1) == Approx(0.25).epsilon(1e-15));

  const auto one = e_step_from_scores(Matrix::Constant(4, 1, -3.0));
  CHECK(one.resp.isOnes());
  CHECK(one.pi(0) == 1.0);

  const auto flat = e_step_from_scores(Matrix::Constant(3, 4, -2.0));
  CHECK(flat.resp.isApprox(Matrix::Constant(3, 4, 0.25)));

  Matrix dead(1, 2);
  dead << -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity();
  CHECK(e_step_from_scores(dead).resp.isApprox(Matrix::Constant(1, 2, 0.5)));
}

TEST_CASE("pseudo-loglikelihood examples") {
  CHECK(pseudo_loglikelihood_from_scores(Matrix::Zero(5, 1)) == 0.0);
  Matrix s(1, 2);
  s << std::log(0.5), std::log(0.5);
  CHECK(pseudo_loglikelihood_from_scores(s) == Approx(0.0).scale(1.0));
  s << std::log(0.5), std::log(0.5) + std::log(3.0);
  CHECK(pseudo_loglikelihood_from_scores(s) == Approx(0.6931471805599453).epsilon(1e-15));
}

TEST_CASE("center update examples") {
  const GeneratorEstimate g = gaussian_generator();
  const DataMatrix X = DataMatrix::Ones(5, 3);
  const Matrix radii = Matrix::Constant(5, 1, 3.0);
  const auto a = center_update(X, Matrix::Ones(5, 1), radii, g, Matrix::Zero(1, 3), 0.7);
  CHECK(a.centers.isApprox(Matrix::Constant(1, 3, 0.7)));

  const DataMatrix Y = test::random_matrix(6, 2, 2);
  Matrix w = Matrix::Zero(6, 1);
  w(3, 0) = 1.0;
  const auto b = center_update(Y, w, Matrix::Constant(6, 1, 1.0), g, Matrix::Zero(1, 2), 1.0);
  CHECK(b.centers.row(0).isApprox(Y.row(3)));

  Matrix wv(6, 1);
  wv << 1, 2, 3, 4, 5, 6;
  const auto c = center_update(Y, wv, Matrix::Constant(6, 1, 1.0), g, Matrix::Zero(1, 2), 1.0);
  const Eigen::RowVectorXd mean = (wv.transpose() * Y) / wv.sum();
  CHECK(c.centers.row(0).isApprox(mean));

  const auto frozen = center_update(Y, Matrix::Zero(6, 1), Matrix::Ones(6, 1), g, Matrix::Ones(1, 2), 1.0);
  CHECK(frozen.frozen == std::vector<int>{0});
  CHECK(frozen.centers.isOnes());
}

TEST_CASE("classification rules") {
  Matrix C(2, 2);
  C << -1, 0, 1, 0;
  const ModelState m = simple_model(C);
  Matrix X(4, 2);
  X << -1, 0, 1, 0, 0, 0, 0.2, 3;
  const auto labels = classify(X, m);
  CHECK(labels == std::vector<int>{0, 1, 0, 1});

  ModelState shifted = m;
  shifted.generator = gaussian_generator(7.0);
  CHECK(classify(X, shifted) == labels);

  const DataMatrix Z = test::random_matrix(40, 2, 5);
  const Matrix r = mahalanobis_radii(Z, m);
  std::vector<int> nearest(40);
  for (Index i = 0; i < 40; ++i) nearest[static_cast<std::size_t>(i)] = r(i, 1) < r(i, 0) ? 1 : 0;
  CHECK(classify(Z, m) == nearest);

  const ModelState single = simple_model(Matrix::Zero(1, 2));
  const auto all = classify(Z, single);
  CHECK(std::all_of(all.begin(), all.end(), [](int l) { return l == 0; }));
}

TEST_CASE("row_argmax ties go to the lowest index") {
  Matrix m(2, 3);
  m << 1, 1, 0, 0, 2, 2;
  CHECK(row_argmax(m) == std::vector<int>{0, 1});
}

TEST_CASE("initial model uses hard proportions and the identity shape") {
  const auto s = small_design(3);
  const auto init = initialize(s.X, 3, InitConfig{}, 4);
  const ModelState m = initial_model(s.X, init.centers, init.hard_resp, GeneratorConfig{});
  CHECK(m.pi.sum() == Approx(1.0));
  CHECK(m.pi.isApprox(init.hard_resp.colwise().sum().transpose() / 120.0));
  CHECK(m.omega.mat().isIdentity());
  CHECK_FALSE(m.generator.empty());
}

TEST_CASE("GEM iterate preserves the model invariants") {
  const auto s = small_design(11);
  const auto init = initialize(s.X, 3, InitConfig{}, 1);
  ModelState m = initial_model(s.X, init.centers, init.hard_resp, GeneratorConfig{});
  GemConfig cfg;
  cfg.K = 3;
  for (int t = 0; t < 4; ++t) {
    const auto it = gem_iterate(s.X, m, cfg);
    m = it.model;
    CHECK(m.sigma.trace() == Approx(12.0).epsilon(1e-6));
    CHECK(max_abs(m.omega.mat() * m.sigma.mat() - Matrix::Identity(12, 12)) < 1e-6);
    CHECK(m.pi.sum() == Approx(1.0).epsilon(1e-15));
    CHECK((m.pi.array() > 0).all());
    CHECK((it.resp.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK(it.diagnostics.steps.max() >= 0.0);
  }
}

TEST_CASE("GEM iterate is equivariant to relabelling the components") {
  const auto s = small_design(12);
  const auto init = initialize(s.X, 3, InitConfig{}, 2);
  const ModelState a = initial_model(s.X, init.centers, init.hard_resp, GeneratorConfig{});
  const std::vector<int> perm{2, 0, 1};
  Matrix c(3, 12);
  Matrix h(120, 3);
  for (int k = 0; k < 3; ++k) {
    c.row(k) = init.centers.row(perm[static_cast<std::size_t>(k)]);
    h.col(k) = init.hard_resp.col(perm[static_cast<std::size_t>(k)]);
  }
  const ModelState b = initial_model(s.X, c, h, GeneratorConfig{});
  GemConfig cfg;
  cfg.K = 3;
  const auto ra = gem_iterate(s.X, a, cfg);
  const auto rb = gem_iterate(s.X, b, cfg);
  for (int k = 0; k < 3; ++k) {
    const auto src = perm[static_cast<std::size_t>(k)];
    CHECK(max_abs(rb.model.centers.row(k) - ra.model.centers.row(src)) < 1e-8);
    CHECK(rb.model.pi(k) == Approx(ra.model.pi(src)));
    CHECK(max_abs(rb.resp.col(k) - ra.resp.col(src)) < 1e-10);
  }
  CHECK(max_abs(rb.model.omega.mat() - ra.model.omega.mat()) < 1e-6);
}

TEST_CASE("fit recovers separated clusters and is deterministic") {
  const auto s = small_design(21, 12, 150);
  GemConfig cfg;
  cfg.K = 3;
  cfg.seed = 5;
  cfg.starts = 2;
  const FitResult a = fit(s.X, cfg);
  CHECK(a.labels == row_argmax(a.resp));
  CHECK(a.iterations >= 1);
  CHECK(a.iterations <= cfg.max_outer);
  CHECK(a.start_logliks.size() == 2);
  CHECK(std::isfinite(a.pseudo_loglik));
  CHECK(a.pseudo_loglik == Approx(pseudo_loglikelihood(s.X, a.model)));

  cfg.threads = 2;
  const FitResult b = fit(s.X, cfg);
  CHECK(b.labels == a.labels);
  CHECK(b.pseudo_loglik == a.pseudo_loglik);
}

TEST_CASE("fit with one component") {
  const auto s = small_design(22);
  GemConfig cfg;
  cfg.K = 1;
  cfg.starts = 1;
  const FitResult f = fit(s.X, cfg);
  CHECK(f.model.pi(0) == 1.0);
  CHECK(std::all_of(f.labels.begin(), f.labels.end(), [](int l) { return l == 0; }));
}

TEST_CASE("fit rejects bad input") {
  GemConfig cfg;
  cfg.K = 5;
  CHECK_THROWS_AS(fit(test::random_matrix(4, 3, 1), cfg), Error);
  cfg.K = 0;
  CHECK_THROWS_AS(fit(test::random_matrix(10, 3, 1), cfg), Error);
  cfg.K = 2;
  DataMatrix bad = test::random_matrix(10, 3, 1);
  bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit(bad, cfg), Error);
}
