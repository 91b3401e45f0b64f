#include "varattack/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varattack {

std::string format_double(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

Json graph_to_json(const DagStructure& g) {
  Json edges = Json::array();
  for (Index i = 0; i < g.d(); ++i)
    for (Index j = 0; j < g.d(); ++j)
      if (g.edges(i, j)) edges.push_back(Json::array({i + 1, j + 1}));
  return Json{{"d", g.d()}, {"labels", g.labels}, {"edges", std::move(edges)}};
}

namespace {

void parse_edge_indices(const Json& edge, Index d, Index& i, Index& j) {
  i = edge.at(0).get<Index>() - 1;
  j = edge.at(1).get<Index>() - 1;
  if (i < 0 || i >= d || j < 0 || j >= d)
    throw std::invalid_argument("edge endpoint out of range");
}

}  // namespace

DagStructure graph_from_json(const Json& j) {
  const Index d = j.at("d").get<Index>();
  if (d < 1) throw std::invalid_argument("node count must be positive");
  BoolMatrix edges = BoolMatrix::Constant(d, d, false);
  for (const auto& edge : j.at("edges")) {
    Index a, b;
    parse_edge_indices(edge, d, a, b);
    edges(a, b) = true;
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return make_dag(std::move(edges), std::move(labels));
}

Json weighted_dag_to_json(const WeightedDag& g) {
  Json edges = Json::array();
  const auto& s = g.structure;
  for (Index i = 0; i < s.d(); ++i)
    for (Index j = 0; j < s.d(); ++j)
      if (s.edges(i, j)) edges.push_back(Json::array({i + 1, j + 1, g.weights(i, j)}));
  return Json{{"d", s.d()}, {"labels", s.labels}, {"edges", std::move(edges)}};
}

WeightedDag weighted_dag_from_json(const Json& j) {
  const Index d = j.at("d").get<Index>();
  if (d < 1) throw std::invalid_argument("node count must be positive");
  BoolMatrix edges = BoolMatrix::Constant(d, d, false);
  MatrixXd weights = MatrixXd::Zero(d, d);
  for (const auto& edge : j.at("edges")) {
    Index a, b;
    parse_edge_indices(edge, d, a, b);
    edges(a, b) = true;
    weights(a, b) = edge.size() > 2 ? edge.at(2).get<double>() : 0.0;
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return WeightedDag{make_dag(std::move(edges), std::move(labels)), std::move(weights)};
}

Json scm_to_json(const WeightedScm& scm) {
  Json j = weighted_dag_to_json(scm.graph);
  j["noise_std"] = std::vector<double>(scm.noise_std.data(),
                                       scm.noise_std.data() + scm.noise_std.size());
  return j;
}

WeightedScm scm_from_json(const Json& j) {
  WeightedDag dag = weighted_dag_from_json(j);
  const auto stds = j.at("noise_std").get<std::vector<double>>();
  VectorXd noise = Eigen::Map<const VectorXd>(stds.data(), static_cast<Index>(stds.size()));
  return make_scm(std::move(dag.structure), std::move(dag.weights), std::move(noise));
}

Json provenance_to_json(const Provenance& p) {
  return Json{{"scm", scm_to_json(p.scm)}, {"n", p.n}, {"seed", p.seed}};
}

Provenance provenance_from_json(const Json& j) {
  Provenance p;
  p.scm = scm_from_json(j.at("scm"));
  p.n = j.at("n").get<Index>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

void write_dataset_csv(const std::filesystem::path& path, const DataMatrix& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  for (Index j = 0; j < data.d(); ++j) {
    if (j) out << ',';
    out << data.labels[static_cast<std::size_t>(j)];
  }
  out << '\n';
  for (Index r = 0; r < data.n(); ++r) {
    for (Index j = 0; j < data.d(); ++j) {
      if (j) out << ',';
      out << format_double(data.values(r, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

DataMatrix read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto labels = split_csv_line(line);
  const Index d = static_cast<Index>(labels.size());
  if (d == 0) throw std::runtime_error("CSV header has no columns");

  std::vector<double> cells;
  Index n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<Index>(fields.size()) != d)
      throw std::runtime_error("CSV row has wrong column count");
    for (const auto& f : fields) {
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(f, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("CSV cell is not a number: " + f);
      }
      if (pos != f.size()) throw std::runtime_error("CSV cell is not a number: " + f);
      cells.push_back(v);
    }
    ++n;
  }
  if (n < 2) throw std::runtime_error("dataset needs at least two rows");

  DataMatrix data;
  data.values.resize(n, d);
  for (Index r = 0; r < n; ++r)
    for (Index j = 0; j < d; ++j)
      data.values(r, j) = cells[static_cast<std::size_t>(r * d + j)];
  data.labels = labels;
  return data;
}

Json solve_result_to_json(const SolveResult& result) {
  Json w = Json::array();
  for (Index i = 0; i < result.w.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < result.w.cols(); ++j) row.push_back(result.w(i, j));
    w.push_back(std::move(row));
  }
  Json trace = Json::array();
  for (const auto& it : result.trace)
    trace.push_back(Json{{"outer", it.outer},
                         {"objective", it.objective},
                         {"h", it.h},
                         {"rho", it.rho}});
  Json j{{"w", std::move(w)},
         {"graph", graph_to_json(result.graph)},
         {"h_final", result.h_final},
         {"objective_final", result.objective_final},
         {"converged", result.converged},
         {"trace", std::move(trace)}};
  if (!result.inner_objectives.empty()) j["inner_objectives"] = result.inner_objectives;
  return j;
}

std::string outcome_csv_header() {
  return "seed,source_kind,attack_kind,lambda,scale_or_margin,accessible,"
         "success,skeleton_match,shd,varsort_before,varsort_after";
}

std::string outcome_csv_row(const OutcomeRow& row) {
  std::ostringstream out;
  out << row.seed << ',' << row.source_kind << ',' << row.attack_kind << ','
      << format_double(row.lambda) << ',' << format_double(row.scale_or_margin) << ','
      << row.accessible << ',' << (row.outcome.success ? 1 : 0) << ','
      << (row.outcome.skeleton_match ? 1 : 0) << ',' << row.outcome.shd_to_expected << ','
      << format_double(row.outcome.varsort_before) << ','
      << format_double(row.outcome.varsort_after);
  return out.str();
}

void write_outcome_csv(const std::filesystem::path& path, const std::vector<OutcomeRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << outcome_csv_header() << '\n';
  for (const auto& row : rows) out << outcome_csv_row(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_oracle_csv(const std::filesystem::path& path, const OracleReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "graph_id,n_edges,mmse,varsortability\n";
  for (const auto& entry : report.entries) {
    out << entry.graph_id << ',' << entry.n_edges << ',' << format_double(entry.mmse) << ',';
    if (entry.varsortability) out << format_double(*entry.varsortability);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Json oracle_summary_to_json(const OracleReport& report, const CorrelationSummary& corr) {
  Json j{{"pearson_r", corr.pearson},
         {"n_points", corr.n_points},
         {"n_graphs", report.entries.size()}};
  if (report.dataset_provenance)
    j["dataset_provenance"] = provenance_to_json(*report.dataset_provenance);
  return j;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCell>& cells) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "scale,lambda,trials,success_ratio,mean_shd\n";
  for (const auto& c : cells)
    out << format_double(c.scale) << ',' << format_double(c.lambda) << ',' << c.trials << ','
        << format_double(c.success_ratio) << ',' << format_double(c.mean_shd) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace varattack
