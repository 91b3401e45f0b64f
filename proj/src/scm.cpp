#include "varattack/scm.hpp"

#include <cmath>
#include <stdexcept>

namespace varattack {

WeightedScm make_scm(DagStructure structure, MatrixXd weights, VectorXd noise_std) {
  const Index d = structure.d();
  if (weights.rows() != d || weights.cols() != d)
    throw std::invalid_argument("weight matrix shape must match the graph");
  if (noise_std.size() != d)
    throw std::invalid_argument("need one noise scale per node");
  for (Index i = 0; i < d; ++i) {
    if (!(noise_std[i] > 0.0)) throw std::invalid_argument("noise scales must be positive");
    for (Index j = 0; j < d; ++j)
      if (!structure.edges(i, j) && weights(i, j) != 0.0)
        throw std::invalid_argument("weight present for a missing edge");
  }
  return WeightedScm{WeightedDag{std::move(structure), std::move(weights)}, std::move(noise_std)};
}

WeightedScm make_uniform_scm(DagStructure structure, double weight, double sigma) {
  const Index d = structure.d();
  MatrixXd w = MatrixXd::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (structure.edges(i, j)) w(i, j) = weight;
  return make_scm(std::move(structure), std::move(w), VectorXd::Constant(d, sigma));
}

WeightedScm make_random_weight_scm(DagStructure structure, double w_lo, double w_hi,
                                   double sigma, Rng& rng) {
  if (!(0.0 < w_lo && w_lo <= w_hi))
    throw std::invalid_argument("weight magnitude range must be positive and ordered");
  const Index d = structure.d();
  MatrixXd w = MatrixXd::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (structure.edges(i, j)) {
        const double magnitude = rng.uniform_range(w_lo, w_hi);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        w(i, j) = sign * magnitude;
      }
  return make_scm(std::move(structure), std::move(w), VectorXd::Constant(d, sigma));
}

DataMatrix sample(const WeightedScm& scm, Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least two samples");
  const Index d = scm.d();
  Rng rng(seed);

  MatrixXd noise(n, d);
  for (Index j = 0; j < d; ++j)
    for (Index r = 0; r < n; ++r) noise(r, j) = scm.noise_std[j] * rng.normal();

  MatrixXd values = MatrixXd::Zero(n, d);
  for (Index node : topological_order(scm.graph.structure)) {
    values.col(node) = noise.col(node);
    for (Index p : scm.graph.structure.parents(node))
      values.col(node) += scm.graph.weights(p, node) * values.col(p);
  }
  return DataMatrix{std::move(values), scm.graph.structure.labels};
}

double column_variance(const DataMatrix& data, Index i) {
  if (i < 0 || i >= data.d()) throw std::invalid_argument("column index out of range");
  if (data.n() < 2) throw std::invalid_argument("need at least two samples");
  return data.values.col(i).squaredNorm() / static_cast<double>(data.n());
}

VectorXd column_variances(const DataMatrix& data) {
  VectorXd out(data.d());
  for (Index i = 0; i < data.d(); ++i) out[i] = column_variance(data, i);
  return out;
}

DataMatrix rescale_column(const DataMatrix& data, Index i, double c) {
  if (i < 0 || i >= data.d()) throw std::invalid_argument("column index out of range");
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("rescaling factor must be positive and finite");
  DataMatrix out = data;
  out.values.col(i) *= c;
  return out;
}

}  // namespace varattack
