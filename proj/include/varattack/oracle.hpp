#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/metrics.hpp"
#include "varattack/scm.hpp"
#include "varattack/types.hpp"

namespace varattack {

struct OracleEntry {
  Index graph_id = 0;  // position in enumerate_dags order
  DagStructure dag;
  Index n_edges = 0;
  double mmse = 0.0;
  std::optional<double> varsortability;  // undefined for the edgeless graph
};

struct OracleReport {
  std::vector<OracleEntry> entries;
  std::optional<Provenance> dataset_provenance;
};

// Exhaustive scoring of every DAG on d <= 5 nodes against the data.
OracleReport score_all_dags(const DataMatrix& data);

// argmin over entries of mmse + penalty * n_edges; ties prefer fewer edges,
// then the lower graph_id.
DagStructure best_dag(const OracleReport& report, double penalty);

double pearson_r(const std::vector<double>& x, const std::vector<double>& y);

struct CorrelationSummary {
  double pearson = 0.0;
  Index n_points = 0;
  std::vector<std::pair<double, double>> points;  // (varsortability, mmse)
};

// Pearson correlation between varsortability and mmse over the entries where
// varsortability is defined. Needs at least 3 such points and nonconstant
// coordinates.
CorrelationSummary varsort_mmse_correlation(const OracleReport& report);

struct Conjecture1Result {
  double forward_mmse = 0.0;
  double reverse_mmse = 0.0;
  bool holds = false;  // reverse_mmse < forward_mmse
};

// Samples a d-node chain, rescales the root column so its variance equals
// margin * Var(sink), then compares the fitted MSE of the forward chain
// against the fully reversed chain. Makes no claim about other DAGs.
Conjecture1Result conjecture1_check(Index d, const VectorXd& weights, const VectorXd& sigmas,
                                    Index n, std::uint64_t seed, double margin);

}  // namespace varattack
