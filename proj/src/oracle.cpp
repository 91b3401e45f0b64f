#include "varattack/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace varattack {

OracleReport score_all_dags(const DataMatrix& data) {
  const Index d = data.d();
  if (d > 5) throw std::invalid_argument("exhaustive scoring is limited to 5 nodes");

  OracleReport report;
  auto dags = enumerate_dags(d);
  report.entries.reserve(dags.size());
  for (std::size_t id = 0; id < dags.size(); ++id) {
    OracleEntry entry;
    entry.graph_id = static_cast<Index>(id);
    entry.n_edges = dags[id].edge_count();
    entry.mmse = mmse(dags[id], data);
    if (entry.n_edges > 0)
      entry.varsortability = varsortability(data, dags[id]).value;
    entry.dag = std::move(dags[id]);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

DagStructure best_dag(const OracleReport& report, double penalty) {
  if (report.entries.empty()) throw std::invalid_argument("empty oracle report");
  const OracleEntry* best = nullptr;
  double best_score = 0.0;
  for (const auto& entry : report.entries) {
    const double score = entry.mmse + penalty * static_cast<double>(entry.n_edges);
    if (best == nullptr || score < best_score ||
        (score == best_score && (entry.n_edges < best->n_edges ||
                                 (entry.n_edges == best->n_edges &&
                                  entry.graph_id < best->graph_id)))) {
      best = &entry;
      best_score = score;
    }
  }
  return best->dag;
}

double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::domain_error("need at least three points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::domain_error("correlation undefined for a constant coordinate");
  return sxy / std::sqrt(sxx * syy);
}

CorrelationSummary varsort_mmse_correlation(const OracleReport& report) {
  std::vector<double> v, m;
  CorrelationSummary summary;
  for (const auto& entry : report.entries) {
    if (!entry.varsortability) continue;
    v.push_back(*entry.varsortability);
    m.push_back(entry.mmse);
    summary.points.emplace_back(*entry.varsortability, entry.mmse);
  }
  summary.n_points = static_cast<Index>(v.size());
  summary.pearson = pearson_r(v, m);
  return summary;
}

Conjecture1Result conjecture1_check(Index d, const VectorXd& weights, const VectorXd& sigmas,
                                    Index n, std::uint64_t seed, double margin) {
  if (d < 2) throw std::invalid_argument("a chain needs at least two nodes");
  if (weights.size() != d - 1) throw std::invalid_argument("need one weight per chain edge");
  if (sigmas.size() != d) throw std::invalid_argument("need one noise scale per node");
  if (!(margin > 0.0)) throw std::invalid_argument("margin must be positive");

  const DagStructure forward = make_chain(d);
  MatrixXd w = MatrixXd::Zero(d, d);
  for (Index i = 0; i + 1 < d; ++i) w(i, i + 1) = weights[i];
  const WeightedScm scm = make_scm(forward, std::move(w), sigmas);

  DataMatrix data = sample(scm, n, seed);
  const double root_var = column_variance(data, 0);
  const double sink_var = column_variance(data, d - 1);
  data = rescale_column(data, 0, std::sqrt(margin * sink_var / root_var));

  Conjecture1Result result;
  result.forward_mmse = mmse(forward, data);
  result.reverse_mmse = mmse(reverse_dag(forward), data);
  result.holds = result.reverse_mmse < result.forward_mmse;
  return result;
}

}  // namespace varattack
