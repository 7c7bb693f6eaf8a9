#pragma once

#include <string>
#include <vector>

#include "egem/config.hpp"
#include "egem/data.hpp"
#include "egem/gem.hpp"

namespace egem {

struct GapTable {
  std::vector<int> Ks;
  std::vector<double> W;   ///< observed dispersion per K
  Matrix W_ref;            ///< B x |Ks|, NaN where the reference fit failed
  std::vector<int> surviving;  ///< reference fits used per K
  std::vector<double> gap;
  std::vector<double> s;   ///< NaN when fewer than two references survive
  int K_lse = 0;
  int K_max = 0;
  std::vector<std::string> notes;
};

/// n^-1 sum_i log(1 + Delta_{i, label_i})
double within_dispersion(const Matrix& radii, const std::vector<int>& labels);
double within_dispersion(const DataMatrix& X, const FitResult& fit);

/// Gap, spread and both selectors from observed and reference dispersions.
GapTable gap_table_from(std::vector<int> Ks, std::vector<double> W, Matrix W_ref);

/// Smallest K_j with Gap_j >= Gap_{j+1} - s_{j+1}; the last K when none qualifies.
int lse_rule(const std::vector<int>& Ks, const std::vector<double>& gap, const std::vector<double>& s);

/// Argmax of the gap, ties to the smaller K.
int max_gap_rule(const std::vector<int>& Ks, const std::vector<double>& gap);

/// Fits GEM at every K on X and on B column-permuted references.
GapTable select_k(const DataMatrix& X, const std::vector<int>& Ks, int B, const GemConfig& cfg);

}  // namespace egem
