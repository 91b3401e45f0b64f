#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "varattack/attack.hpp"
#include "varattack/graph.hpp"
#include "varattack/notears.hpp"
#include "varattack/oracle.hpp"
#include "varattack/scm.hpp"

namespace varattack {

using Json = nlohmann::json;

// Graph JSON: {"d": d, "labels": [...], "edges": [[i, j], ...]} with 1-based
// node indices; weighted variants carry [i, j, w] triples.
Json graph_to_json(const DagStructure& g);
DagStructure graph_from_json(const Json& j);
Json weighted_dag_to_json(const WeightedDag& g);
WeightedDag weighted_dag_from_json(const Json& j);

Json scm_to_json(const WeightedScm& scm);
WeightedScm scm_from_json(const Json& j);

Json provenance_to_json(const Provenance& p);
Provenance provenance_from_json(const Json& j);

// Header row of labels, one sample per row, '.' decimal separator, no index
// column. Values are written as shortest exact round-trip decimals.
void write_dataset_csv(const std::filesystem::path& path, const DataMatrix& data);
DataMatrix read_dataset_csv(const std::filesystem::path& path);

Json solve_result_to_json(const SolveResult& result);

// One attack outcome row plus the experiment context it ran under.
struct OutcomeRow {
  std::uint64_t seed = 0;
  std::string source_kind;
  std::string attack_kind;
  double lambda = 0.0;
  double scale_or_margin = 0.0;
  std::string accessible;  // "all" or ';'-joined 1-based column indices
  AttackOutcome outcome;
};

std::string outcome_csv_header();
std::string outcome_csv_row(const OutcomeRow& row);
void write_outcome_csv(const std::filesystem::path& path, const std::vector<OutcomeRow>& rows);

void write_oracle_csv(const std::filesystem::path& path, const OracleReport& report);
Json oracle_summary_to_json(const OracleReport& report, const CorrelationSummary& corr);

struct SweepCell {
  double scale = 0.0;
  double lambda = 0.0;
  int trials = 0;
  double success_ratio = 0.0;
  double mean_shd = 0.0;
};

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCell>& cells);

std::string format_double(double v);  // shortest exact round-trip decimal

}  // namespace varattack
