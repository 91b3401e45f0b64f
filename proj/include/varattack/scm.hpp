#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/rng.hpp"
#include "varattack/types.hpp"

namespace varattack {

// Linear structural causal model with independent zero-mean Gaussian noise:
//   X_j = sum_{i in parents(j)} w_ij * X_i + eps_j,   eps_j ~ N(0, noise_std_j^2)
struct WeightedScm {
  WeightedDag graph;
  VectorXd noise_std;

  Index d() const { return graph.structure.d(); }
};

// n samples by d columns, one column per node.
struct DataMatrix {
  MatrixXd values;
  std::vector<std::string> labels;

  Index n() const { return values.rows(); }
  Index d() const { return values.cols(); }
};

// Where a dataset came from, for replay.
struct Provenance {
  WeightedScm scm;
  Index n = 0;
  std::uint64_t seed = 0;
};

WeightedScm make_scm(DagStructure structure, MatrixXd weights, VectorXd noise_std);

// Every edge gets the same weight, every node the same noise scale.
WeightedScm make_uniform_scm(DagStructure structure, double weight, double sigma);

// Edge weights drawn as sign * U[w_lo, w_hi], per edge.
WeightedScm make_random_weight_scm(DagStructure structure, double w_lo, double w_hi,
                                   double sigma, Rng& rng);

// Ancestral sampling in topological order; noise drawn column-by-column in
// node index order so (scm, n, seed) fixes the output exactly. n >= 2.
DataMatrix sample(const WeightedScm& scm, Index n, std::uint64_t seed);

// Mean square of the column. Columns are zero-mean by construction of the
// generative model and are deliberately not centered, so that the identity
// "variance of a parentless column == its regression MSE" is exact.
double column_variance(const DataMatrix& data, Index i);
VectorXd column_variances(const DataMatrix& data);

// Returns a copy with column i multiplied by c > 0; variance scales by c^2.
DataMatrix rescale_column(const DataMatrix& data, Index i, double c);

}  // namespace varattack
