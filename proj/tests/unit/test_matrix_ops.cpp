#include "support.hpp"

#include "egem/error.hpp"

using namespace egem;
using egem::test::random_matrix;
using egem::test::random_spd;
using doctest::Approx;

TEST_CASE("clip saturates and passes the interior") {
  CHECK(clip(1.5, 0, 1) == 1.0);
  CHECK(clip(-0.2, 0, 1) == 0.0);
  CHECK(clip(0.5, 0, 1) == 0.5);
}

TEST_CASE("lin_interp midpoint and constant extensions") {
  const InterpCurve c({1.0, 2.0}, {0.0, 10.0});
  CHECK(lin_interp(c, 1.5) == Approx(5.0));
  CHECK(lin_interp(c, 0.5) == 0.0);
  CHECK(lin_interp(c, 3.0) == 10.0);
}

TEST_CASE("lin_interp is exact on knots and monotone between them") {
  const InterpCurve c({0.0, 0.3, 1.0, 4.0}, {-1.0, 0.5, 0.7, 9.0});
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(lin_interp(c, c.knots()[i]) == c.values()[i]);
  double prev = lin_interp(c, -1.0);
  for (double u = -1.0; u <= 5.0; u += 0.01) {
    const double v = lin_interp(c, u);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("InterpCurve rejects unordered knots") {
  CHECK_THROWS_AS(InterpCurve({1.0, 1.0}, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(InterpCurve({1.0, 2.0}, {0.0}), Error);
}

TEST_CASE("proj_pd examples") {
  Matrix d(2, 2);
  d << 2, 0, 0, -1;
  const SymMatrix out = proj_pd(SymMatrix(d), 0.01);
  CHECK(out(0, 0) == Approx(2.0));
  CHECK(out(1, 1) == Approx(0.01));
  CHECK(std::abs(out(0, 1)) < 1e-15);

  const SymMatrix id = proj_pd(SymMatrix::identity(3), 1e-8);
  CHECK(max_abs(id.mat() - Matrix::Identity(3, 3)) < 1e-14);

  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  const SymMatrix p = proj_pd(SymMatrix(a), 0.01);
  CHECK(p(0, 0) == Approx(0.255).epsilon(1e-12));
  CHECK(p(0, 1) == Approx(0.245).epsilon(1e-12));
  CHECK(p(1, 0) == Approx(0.245).epsilon(1e-12));
  CHECK(p(1, 1) == Approx(0.255).epsilon(1e-12));
}

TEST_CASE("proj_pd floors the spectrum on random symmetric input") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SymMatrix a(random_matrix(6, 6, s));
    CHECK(egem::test::min_eigenvalue(proj_pd(a, 1e-3)) >= 1e-3 - 1e-12);
  }
}

TEST_CASE("trace_normalize examples and idempotence") {
  const SymMatrix a = trace_normalize(SymMatrix::diagonal(Vector::Constant(2, 2.0)));
  CHECK(max_abs(a.mat() - Matrix::Identity(2, 2)) < 1e-15);
  Vector d(2);
  d << 1, 3;
  const SymMatrix b = trace_normalize(SymMatrix::diagonal(d));
  CHECK(b(0, 0) == Approx(0.5));
  CHECK(b(1, 1) == Approx(1.5));

  const SymMatrix r = random_spd(7, 3);
  const SymMatrix once = trace_normalize(r);
  CHECK(once.trace() == Approx(7.0).epsilon(1e-13));
  CHECK(max_abs(trace_normalize(once).mat() - once.mat()) < 1e-12);
  CHECK_THROWS_AS(trace_normalize(SymMatrix(Matrix::Zero(2, 2))), Error);
}

TEST_CASE("soft_threshold_offdiag examples") {
  Matrix a(2, 2);
  a << 1, 0.5, 0.5, 1;
  const SymMatrix s(a);
  CHECK(max_abs(soft_threshold_offdiag(s, 0.0).mat() - a) == 0.0);
  const SymMatrix t = soft_threshold_offdiag(s, 0.2);
  CHECK(t(0, 1) == Approx(0.3));
  CHECK(t(1, 0) == Approx(0.3));
  CHECK(t(0, 0) == 1.0);
  const SymMatrix k = soft_threshold_offdiag(s, 1.0);
  CHECK(max_abs(k.mat() - Matrix::Identity(2, 2)) == 0.0);
}

TEST_CASE("soft_threshold_offdiag keeps symmetry and the diagonal") {
  const SymMatrix a(random_matrix(5, 5, 11));
  const SymMatrix t = soft_threshold_offdiag(a, 0.3);
  CHECK(t.mat() == t.mat().transpose());
  CHECK(t.mat().diagonal() == a.mat().diagonal());
}

TEST_CASE("symmetric_sqrt examples") {
  CHECK(max_abs(symmetric_sqrt(SymMatrix::identity(3)).mat() - Matrix::Identity(3, 3)) < 1e-14);
  Vector d(2);
  d << 4, 9;
  const SymMatrix s = symmetric_sqrt(SymMatrix::diagonal(d));
  CHECK(s(0, 0) == Approx(2.0));
  CHECK(s(1, 1) == Approx(3.0));
}

TEST_CASE("symmetric_sqrt squares back on conditioned PSD input") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SymMatrix a = random_spd(8, 100 + s, 1e-6);
    const Matrix r = symmetric_sqrt(a).mat();
    CHECK(max_abs(r * r - a.mat()) <= 1e-8 * max_abs(a.mat()));
  }
}

TEST_CASE("poet reductions") {
  const SymMatrix a(random_matrix(5, 5, 21));
  CHECK(max_abs(poet(a, 0, 0.0, 1e-8).mat() - proj_pd(a, 1e-8).mat()) < 1e-12);

  Vector d(3);
  d << 1, 2, 3;
  const SymMatrix diag = SymMatrix::diagonal(d);
  CHECK(max_abs(poet(diag, 0, 0.7, 1e-8).mat() - diag.mat()) < 1e-12);

  const SymMatrix pd = random_spd(4, 5);
  CHECK(max_abs(poet(pd, 4, 0.0, 1e-8).mat() - proj_pd(pd, 1e-8).mat()) < 1e-10);
}

TEST_CASE("poet on a spiked fixture matches the frozen oracle") {
  Vector q(6);
  q << 1, 2, 3, 4, 5, 6;
  q.normalize();
  Matrix pert = Matrix::Zero(6, 6);
  pert(0, 1) = pert(1, 0) = 1;
  pert(2, 4) = pert(4, 2) = -1;
  pert(3, 5) = pert(5, 3) = 3;
  const Matrix a = 10.0 * q * q.transpose() + 0.05 * pert + Matrix::Identity(6, 6);
  const SymMatrix out = poet(SymMatrix(a), 1, 0.1, 1e-8);
  const double expect[6][6] = {
      {1.109890109890113, 0.24301036352478686, 0.3606021617391035, 0.49575153177095416, 0.6042145842712876,
       0.7345946295104442},
      {0.24301036352478686, 1.4395604395604416, 0.715883511924952, 0.979120879120879, 1.1989010989011,
       1.4186813186813192},
      {0.3606021617391034, 0.7158835119249519, 1.9890109890109893, 1.4186813186813183, 1.6983516483516479,
       2.078021978021977},
      {0.4957515317709541, 0.9791208791208789, 1.4186813186813183, 2.7582417582417573, 2.2978021978021963,
       2.8873626373626355},
      {0.6042145842712876, 1.1989010989011002, 1.698351648351648, 2.2978021978021963, 3.747252747252749,
       3.3967032967032957},
      {0.7345946295104441, 1.4186813186813192, 2.078021978021977, 2.8873626373626355, 3.3967032967032953,
       4.956043956043954}};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(out(i, j) == Approx(expect[i][j]).epsilon(1e-9));
}

TEST_CASE("inverse_pd inverts and rejects indefinite input") {
  const SymMatrix a = random_spd(6, 9);
  CHECK(max_abs(inverse_pd(a).mat() * a.mat() - Matrix::Identity(6, 6)) < 1e-10);
  Matrix b(2, 2);
  b << 1, 2, 2, 1;
  CHECK_THROWS_AS(inverse_pd(SymMatrix(b)), Error);
}

TEST_CASE("ordered_eigen sorts descending with sign convention") {
  const SymMatrix a = random_spd(5, 31);
  const auto e = ordered_eigen(a);
  for (Index j = 1; j < 5; ++j) CHECK(e.values(j - 1) >= e.values(j));
  for (Index j = 0; j < 5; ++j) {
    Index arg = 0;
    e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(e.vectors(arg, j) > 0);
  }
  CHECK(max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - a.mat()) < 1e-12);
}
