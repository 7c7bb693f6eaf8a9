#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egem/data.hpp"
#include "egem/matrix_ops.hpp"

namespace egem {

enum class ScatterKind { AR, CS };
enum class RadialKind { Gaussian, T, Laplace, Slash };
enum class MeanKind { Sparse, DenseBlock };

struct ScatterSpec {
  ScatterKind kind = ScatterKind::AR;
  double rho = 0.5;  ///< AR parameter, ignored for CS
};

struct RadialSpec {
  RadialKind kind = RadialKind::T;
  double nu = 5.0;  ///< degrees of freedom for t and slash
};

struct SimDesign {
  int n = 300;
  int p = 100;
  int K = 3;
  ScatterSpec scatter;
  RadialSpec radial;
  MeanKind mean_kind = MeanKind::Sparse;
  double delta = 1.5;
  std::uint64_t seed = 1;
  /// Test hook: every radius set to zero, so rows equal their centers.
  bool zero_radius = false;

  void validate() const;
};

/// AR: rho^|a-b|. CS: 0.5 on the off-diagonal, 1 on the diagonal.
SymMatrix build_scatter(const ScatterSpec& spec, int p);

/// Sparse: the three six-coordinate patterns scaled by delta. DenseBlock:
/// quarter-block coefficients (+-1.5, +-0.5) scaled by delta. K <= 3.
Matrix build_means(MeanKind kind, int p, int K, double delta);

std::vector<double> sample_radial(const RadialSpec& spec, int p, std::size_t count, std::uint64_t seed);

struct SimSample {
  DataMatrix X;
  std::vector<int> labels;  ///< 0-based truth
};

/// X_i = mu_{c_i} + R_i S U_i with uniform labels, S the symmetric square root
/// of the scatter and U_i a normalised Gaussian vector.
SimSample sample_mixture(const SimDesign& design);

/// "gaussian", "t5" (any "t<nu>"), "laplace", "slash" (any "slash<nu>", default 4).
RadialSpec parse_radial(const std::string& name);
std::string radial_name(const RadialSpec& spec);

}  // namespace egem
