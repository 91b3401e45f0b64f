#include <doctest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "varattack/oracle.hpp"

using namespace varattack;

namespace {

// Plain two-pass Pearson formula, independent of the implementation.
double pearson_reference(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

OracleEntry plain_entry(Index id, Index n_edges, double mmse) {
  OracleEntry e;
  e.graph_id = id;
  e.n_edges = n_edges;
  e.mmse = mmse;
  return e;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("score_all_dags covers the 3-node catalogue faithfully") {
  const auto data = helpers::random_chain_data(3, 3000, 70);
  const auto report = score_all_dags(data);
  const auto dags = enumerate_dags(3);
  REQUIRE(report.entries.size() == 25);

  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    CHECK(e.graph_id == static_cast<Index>(i));
    CHECK(e.dag == dags[i]);
    CHECK(e.n_edges == dags[i].edge_count());
    CHECK(e.mmse == doctest::Approx(mmse(dags[i], data)).epsilon(1e-12));
    if (dags[i].edge_count() == 0) {
      CHECK_FALSE(e.varsortability.has_value());
    } else {
      REQUIRE(e.varsortability.has_value());
      CHECK(*e.varsortability == varsortability(data, dags[i]).value);
    }
  }
}

TEST_CASE("the empty graph scores the raw variance total") {
  const auto data = helpers::random_chain_data(3, 2000, 71);
  const auto report = score_all_dags(data);
  CHECK(report.entries[0].n_edges == 0);
  CHECK(report.entries[0].mmse == column_variances(data).sum());
}

TEST_CASE("a complete DAG is never beaten on raw mmse") {
  const auto data = helpers::random_chain_data(3, 2000, 72);
  const auto report = score_all_dags(data);
  double best = report.entries[0].mmse;
  double complete = -1.0;
  for (const auto& e : report.entries) {
    best = std::min(best, e.mmse);
    if (e.n_edges == 3) complete = std::min(complete < 0 ? e.mmse : complete, e.mmse);
  }
  CHECK(complete <= best + 1e-12);
}

TEST_CASE("best_dag tie-breaking: mmse, then edges, then id") {
  OracleReport report;
  report.entries.push_back(plain_entry(0, 0, 5.0));
  report.entries.push_back(plain_entry(1, 1, 3.0));
  report.entries.push_back(plain_entry(2, 1, 3.0));
  report.entries.push_back(plain_entry(3, 2, 3.0));
  for (auto& e : report.entries) e.dag = enumerate_dags(3)[static_cast<std::size_t>(e.graph_id)];

  // Flat scores at penalty 0: ids 1, 2, 3 tie on mmse; fewer edges wins, then id.
  CHECK(best_dag(report, 0.0) == report.entries[1].dag);

  // A huge penalty makes the edgeless graph optimal despite its mmse.
  CHECK(best_dag(report, 100.0) == report.entries[0].dag);

  // Penalty 2 exactly levels id 0 (5.0) and id 1 (3.0 + 2): fewer edges wins.
  CHECK(best_dag(report, 2.0) == report.entries[0].dag);
}

TEST_CASE("best_dag on real data never loses to any catalogue entry") {
  const auto data = helpers::random_chain_data(3, 2000, 73);
  const auto report = score_all_dags(data);
  for (const double penalty : {0.0, 0.05, 0.5}) {
    const auto pick = best_dag(report, penalty);
    double pick_score = 0.0;
    for (const auto& e : report.entries)
      if (e.dag == pick) pick_score = e.mmse + penalty * static_cast<double>(e.n_edges);
    for (const auto& e : report.entries)
      CHECK(pick_score <= e.mmse + penalty * static_cast<double>(e.n_edges) + 1e-12);
  }
}

TEST_CASE("pearson_r fixtures") {
  CHECK(pearson_r({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson_r({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> x{0.3, 1.7, 2.2, 4.1, 5.0};
  const std::vector<double> y{2.9, 1.1, 3.8, 0.4, 2.2};
  CHECK(pearson_r(x, y) == doctest::Approx(pearson_reference(x, y)).epsilon(1e-12));

  CHECK_THROWS_AS(pearson_r({1, 1, 1}, {1, 2, 3}), std::domain_error);
  CHECK_THROWS_AS(pearson_r({1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pearson_r({1, 2}, {3, 4}), std::domain_error);
}

TEST_CASE("varsortable data: lower mmse goes with higher varsortability") {
  const auto data = helpers::random_chain_data(3, 5000, 74);
  const auto summary = varsort_mmse_correlation(score_all_dags(data));
  CHECK(summary.n_points == 24);  // everything but the edgeless graph
  CHECK(summary.points.size() == 24);
  CHECK(summary.pearson < 0.0);

  std::vector<double> vs, ms;
  for (const auto& [v, m] : summary.points) {
    vs.push_back(v);
    ms.push_back(m);
  }
  CHECK(summary.pearson == doctest::Approx(pearson_reference(vs, ms)).epsilon(1e-12));
}

TEST_CASE("rescaled root makes the reversed chain the better fit") {
  const auto res = conjecture1_check(3, VectorXd::Constant(2, 1.0),
                                     VectorXd::Constant(3, 1.0), 8000, 75, 2.0);
  CHECK(res.holds);
  CHECK(res.reverse_mmse < res.forward_mmse);
}

}  // TEST_SUITE
