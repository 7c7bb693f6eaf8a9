#include "egem/simdata.hpp"

#include <cmath>
#include <random>

#include "egem/error.hpp"
#include "egem/rng.hpp"

namespace egem {
namespace {

void check_radial(const RadialSpec& spec) {
  if ((spec.kind == RadialKind::T || spec.kind == RadialKind::Slash) && !(spec.nu > 2.0)) {
    fail(ErrorCode::InvalidArgument, "t and slash laws need nu > 2");
  }
}

double draw_radius(const RadialSpec& spec, int p, CounterRng& rng) {
  std::chi_squared_distribution<double> chi_p(p);
  const double q = chi_p(rng);
  switch (spec.kind) {
    case RadialKind::Gaussian:
      return std::sqrt(q);
    case RadialKind::T: {
      std::chi_squared_distribution<double> chi_nu(spec.nu);
      const double g = chi_nu(rng);
      return std::sqrt((spec.nu - 2.0) * q / g);
    }
    case RadialKind::Laplace: {
      std::exponential_distribution<double> expo(1.0);
      return std::sqrt(expo(rng) * q);
    }
    case RadialKind::Slash: {
      double v = rng.uniform();
      while (v == 0.0) v = rng.uniform();
      return std::sqrt((spec.nu - 2.0) / spec.nu) * std::pow(v, -1.0 / spec.nu) * std::sqrt(q);
    }
  }
  return 0.0;
}

}  // namespace

void SimDesign::validate() const {
  if (n < 1 || p < 1 || K < 1) fail(ErrorCode::InvalidArgument, "design needs n, p, K >= 1");
  if (scatter.kind == ScatterKind::AR && !(scatter.rho > -1.0 && scatter.rho < 1.0)) {
    fail(ErrorCode::InvalidArgument, "AR parameter must lie in (-1, 1)");
  }
  if (!(delta > 0.0)) fail(ErrorCode::InvalidArgument, "delta must be positive");
  check_radial(radial);
}

SymMatrix build_scatter(const ScatterSpec& spec, int p) {
  if (p < 1) fail(ErrorCode::InvalidArgument, "scatter dimension must be positive");
  Matrix s(p, p);
  if (spec.kind == ScatterKind::AR) {
    if (!(spec.rho > -1.0 && spec.rho < 1.0)) fail(ErrorCode::InvalidArgument, "AR parameter must lie in (-1, 1)");
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) s(a, b) = std::pow(spec.rho, std::abs(a - b));
  } else {
    s.setConstant(0.5);
    s.diagonal().setOnes();
  }
  return SymMatrix::trusted(std::move(s));
}

Matrix build_means(MeanKind kind, int p, int K, double delta) {
  if (K < 1 || K > 3) fail(ErrorCode::InvalidArgument, "mean designs define at most three centers");
  Matrix mu = Matrix::Zero(K, p);
  if (kind == MeanKind::Sparse) {
    if (p < 6) fail(ErrorCode::InvalidArgument, "sparse means need p >= 6");
    static constexpr double pattern[3][6] = {
        {1, 1, 1, 0, 0, 0}, {-1, 0, 0, 1, 1, 0}, {0, -1, 1, -1, 0, 1}};
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < 6; ++j) mu(k, j) = delta * pattern[k][j];
  } else {
    if (p % 4 != 0) fail(ErrorCode::InvalidArgument, "dense block means need p divisible by 4");
    static constexpr double coef[3][4] = {{1.5, 0.5, -0.5, -1.5}, {-0.5, 1.5, 0.5, -1.5}, {0.5, -1.5, 1.5, -0.5}};
    const int q = p / 4;
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < p; ++j) mu(k, j) = delta * coef[k][j / q];
  }
  return mu;
}

std::vector<double> sample_radial(const RadialSpec& spec, int p, std::size_t count, std::uint64_t seed) {
  check_radial(spec);
  if (p < 1) fail(ErrorCode::InvalidArgument, "dimension must be positive");
  CounterRng rng(seed, {0x4AD});
  std::vector<double> out(count);
  for (auto& r : out) r = draw_radius(spec, p, rng);
  return out;
}

SimSample sample_mixture(const SimDesign& d) {
  d.validate();
  const Matrix mu = build_means(d.mean_kind, d.p, d.K, d.delta);
  const Matrix S = symmetric_sqrt(build_scatter(d.scatter, d.p)).mat();

  SimSample out{DataMatrix(d.n, d.p), std::vector<int>(static_cast<std::size_t>(d.n))};
  CounterRng label_rng(d.seed, {0x1AB});
  CounterRng dir_rng(d.seed, {0xD1});
  CounterRng rad_rng(d.seed, {0x4AD});
  std::uniform_int_distribution<int> pick(0, d.K - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(d.p);
  for (int i = 0; i < d.n; ++i) {
    const int k = pick(label_rng);
    out.labels[static_cast<std::size_t>(i)] = k;
    double norm = 0.0;
    while (!(norm > 0.0)) {
      for (int j = 0; j < d.p; ++j) u(j) = normal(dir_rng);
      norm = u.norm();
    }
    u /= norm;
    const double r = d.zero_radius ? 0.0 : draw_radius(d.radial, d.p, rad_rng);
    out.X.row(i) = mu.row(k) + r * (S * u).transpose();
  }
  return out;
}

RadialSpec parse_radial(const std::string& name) {
  auto tail = [&](std::size_t prefix, double fallback) {
    if (name.size() == prefix) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(name.substr(prefix), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != name.size() - prefix) fail(ErrorCode::InvalidArgument, "unknown radial law '" + name + "'");
    return v;
  };
  RadialSpec spec;
  if (name == "gaussian") {
    spec.kind = RadialKind::Gaussian;
  } else if (name == "laplace") {
    spec.kind = RadialKind::Laplace;
  } else if (name.rfind("slash", 0) == 0) {
    spec = {RadialKind::Slash, tail(5, 4.0)};
  } else if (name.rfind("t", 0) == 0) {
    spec = {RadialKind::T, tail(1, 5.0)};
  } else {
    fail(ErrorCode::InvalidArgument, "unknown radial law '" + name + "'");
  }
  check_radial(spec);
  return spec;
}

std::string radial_name(const RadialSpec& spec) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  };
  switch (spec.kind) {
    case RadialKind::Gaussian: return "gaussian";
    case RadialKind::T: return "t" + num(spec.nu);
    case RadialKind::Laplace: return "laplace";
    case RadialKind::Slash: return "slash" + num(spec.nu);
  }
  return "";
}

}  // namespace egem
