#include "varattack/metrics.hpp"

#include <stdexcept>

namespace varattack {

double inc(double a, double b) {
  if (a < b) return 1.0;
  if (a == b) return 0.5;
  return 0.0;
}

VarsortReport varsortability(const DataMatrix& data, const DagStructure& g) {
  if (data.d() != g.d()) throw std::invalid_argument("data and graph dimension mismatch");
  const auto pairs = path_pairs(g);
  if (pairs.empty())
    throw std::domain_error("varsortability is undefined for a graph without edges");

  const VectorXd vars = column_variances(data);
  VarsortReport report;
  report.denominator = static_cast<Index>(pairs.size());
  report.per_pair.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double v = inc(vars[i], vars[j]);
    report.numerator += v;
    report.per_pair.emplace_back(i, j, v);
  }
  report.value = report.numerator / static_cast<double>(report.denominator);
  return report;
}

OlsFit fit_ols(const DataMatrix& data, Index node, const std::vector<Index>& parents) {
  const Index n = data.n();
  const Index d = data.d();
  if (node < 0 || node >= d) throw std::invalid_argument("node index out of range");
  for (Index p : parents) {
    if (p < 0 || p >= d) throw std::invalid_argument("parent index out of range");
    if (p == node) throw std::invalid_argument("a node cannot regress on itself");
  }

  OlsFit fit;
  fit.node = node;
  fit.parents = parents;
  const auto y = data.values.col(node);
  if (parents.empty()) {
    fit.coefficients = VectorXd();
    fit.residual_mse = y.squaredNorm() / static_cast<double>(n);
    return fit;
  }

  MatrixXd p(n, static_cast<Index>(parents.size()));
  for (std::size_t k = 0; k < parents.size(); ++k)
    p.col(static_cast<Index>(k)) = data.values.col(parents[k]);

  // Complete orthogonal decomposition: minimum-norm solution when the parent
  // columns are collinear.
  fit.coefficients = p.completeOrthogonalDecomposition().solve(y);
  fit.residual_mse = (y - p * fit.coefficients).squaredNorm() / static_cast<double>(n);
  return fit;
}

double mmse(const DagStructure& g, const DataMatrix& data) {
  if (data.d() != g.d()) throw std::invalid_argument("data and graph dimension mismatch");
  double total = 0.0;
  for (Index j = 0; j < g.d(); ++j)
    total += fit_ols(data, j, g.parents(j)).residual_mse;
  return total;
}

int structural_hamming_distance(const DagStructure& g1, const DagStructure& g2) {
  if (g1.d() != g2.d()) throw std::invalid_argument("graphs must share the node set");
  int dist = 0;
  for (Index i = 0; i < g1.d(); ++i)
    for (Index j = i + 1; j < g1.d(); ++j) {
      const bool a_fwd = g1.edges(i, j), a_bwd = g1.edges(j, i);
      const bool b_fwd = g2.edges(i, j), b_bwd = g2.edges(j, i);
      if (a_fwd != b_fwd || a_bwd != b_bwd) ++dist;
    }
  return dist;
}

}  // namespace varattack
