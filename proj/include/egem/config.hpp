#pragma once

#include <cstdint>
#include <vector>

namespace egem {

/// Tunables of the common-precision block.
struct ShapeConfig {
  double rho_T = 0.05;      ///< Tyler ridge, in (0, 1)
  double eps_r = 1e-10;     ///< radial floor in the sign pilot and Tyler weights
  double eps_pd = 1e-8;     ///< eigenvalue floor of the PD projection
  double c_u = 0.5;         ///< POET threshold constant
  double c_Omega = 0.5;     ///< graphical-lasso base penalty constant
  double gamma_ebic = 0.5;
  std::vector<double> lambda_grid_multipliers{0.25, 0.5, 1.0, 2.0, 4.0};
  int M_kr = 8;             ///< eigenvalue-ratio search cap
  int tyler_max_iter = 100;
  double tyler_tol = 1e-6;
  double eta_Omega = 0.7;   ///< precision damping, in (0, 1]
  double glasso_tol = 1e-4;
  int glasso_max_iter = 500;

  void validate() const;
};

struct GeneratorConfig {
  int grid_size = 200;      ///< M
  double lambda_sp = 1e-3;  ///< smoothing parameter on the [0,1]-rescaled transformed-radius axis
  double h_min = 1e-3;
  double eps_u = 1e-8;
  double omega_min = 1e-3;
  double omega_max = 1e3;
  double density_floor = 1e-300;

  void validate() const;
};

/// Sparse K-median initializer knobs.
struct InitConfig {
  int permutations = 10;    ///< B for the threshold selector
  int starts = 5;
  int max_iter = 50;

  void validate() const;
};

struct GemConfig {
  int K = 2;
  double eta_mu = 0.7;
  ShapeConfig shape;
  GeneratorConfig generator;
  InitConfig init;
  int starts = 3;
  int max_outer = 25;
  double outer_tol = 1e-4;
  std::uint64_t seed = 1;
  /// Workers for the multistart loop; 1 keeps everything on the calling thread.
  unsigned threads = 1;

  void validate() const;
};

}  // namespace egem
