#include "egem/config.hpp"

#include <string>

#include "egem/error.hpp"

namespace egem {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorCode::InvalidArgument, "invalid configuration: " + what);
}

}  // namespace

void ShapeConfig::validate() const {
  require(rho_T > 0.0 && rho_T < 1.0, "rho_T must lie in (0, 1)");
  require(eps_r > 0.0, "eps_r must be positive");
  require(eps_pd > 0.0, "eps_pd must be positive");
  require(c_u > 0.0, "c_u must be positive");
  require(c_Omega > 0.0, "c_Omega must be positive");
  require(gamma_ebic >= 0.0, "gamma_ebic must be non-negative");
  require(!lambda_grid_multipliers.empty(), "lambda grid must be non-empty");
  for (double m : lambda_grid_multipliers) require(m > 0.0, "lambda multipliers must be positive");
  require(M_kr >= 1, "M_kr must be at least 1");
  require(tyler_max_iter >= 1, "tyler_max_iter must be at least 1");
  require(tyler_tol > 0.0, "tyler_tol must be positive");
  require(eta_Omega > 0.0 && eta_Omega <= 1.0, "eta_Omega must lie in (0, 1]");
  require(glasso_tol > 0.0, "glasso_tol must be positive");
  require(glasso_max_iter >= 1, "glasso_max_iter must be at least 1");
}

void GeneratorConfig::validate() const {
  require(grid_size >= 2, "generator grid size must be at least 2");
  require(lambda_sp > 0.0, "lambda_sp must be positive");
  require(h_min > 0.0, "h_min must be positive");
  require(eps_u > 0.0, "eps_u must be positive");
  require(omega_min <= omega_max, "omega_min must not exceed omega_max");
  require(density_floor > 0.0, "density floor must be positive");
}

void InitConfig::validate() const {
  require(permutations >= 1, "init permutations must be at least 1");
  require(starts >= 1, "init starts must be at least 1");
  require(max_iter >= 1, "init max_iter must be at least 1");
}

void GemConfig::validate() const {
  require(K >= 1, "K must be at least 1");
  require(eta_mu > 0.0 && eta_mu <= 1.0, "eta_mu must lie in (0, 1]");
  require(starts >= 1, "starts must be at least 1");
  require(max_outer >= 0, "max_outer must be non-negative");
  require(outer_tol > 0.0, "outer_tol must be positive");
  require(threads >= 1, "threads must be at least 1");
  shape.validate();
  generator.validate();
  init.validate();
}

}  // namespace egem
