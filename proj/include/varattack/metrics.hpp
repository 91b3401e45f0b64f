#pragma once

#include <tuple>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/scm.hpp"
#include "varattack/types.hpp"

namespace varattack {

// Order indicator: 1 if a < b, 1/2 if a == b (exact), 0 if a > b.
double inc(double a, double b);

struct VarsortReport {
  double value = 0.0;                                     // numerator / denominator
  double numerator = 0.0;
  Index denominator = 0;                                  // == |path_pairs(g)|
  std::vector<std::tuple<Index, Index, double>> per_pair; // (i, j, inc) per path pair
};

// Fraction of directed paths of g whose endpoint variances increase along the
// path, counted per power as in path_pairs. Undefined (throws) for edgeless g.
VarsortReport varsortability(const DataMatrix& data, const DagStructure& g);

struct OlsFit {
  Index node = 0;
  std::vector<Index> parents;
  VectorXd coefficients;       // aligned with parents
  double residual_mse = 0.0;   // (1/n) * ||y - P beta||^2
};

// No-intercept least squares of column `node` on the parent columns;
// minimum-norm solution under collinearity. Empty parent set: no coefficients,
// residual_mse == column_variance(data, node).
OlsFit fit_ols(const DataMatrix& data, Index node, const std::vector<Index>& parents);

// Model MSE of a structure: sum over nodes of the per-node OLS residual MSE
// (parentless nodes contribute their column variance).
double mmse(const DagStructure& g, const DataMatrix& data);

// Insertions + deletions + reversals, a reversal counting once.
int structural_hamming_distance(const DagStructure& g1, const DagStructure& g2);

}  // namespace varattack
