#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "helpers.hpp"
#include "varattack/graph.hpp"

using namespace varattack;

namespace {

// Reference cycle check by plain DFS, independent of is_acyclic's Kahn loop.
bool dfs_acyclic(const BoolMatrix& adj) {
  const Index d = adj.rows();
  std::vector<int> state(static_cast<std::size_t>(d), 0);  // 0 new, 1 open, 2 done
  std::vector<Index> stack;
  for (Index root = 0; root < d; ++root) {
    if (state[static_cast<std::size_t>(root)] != 0) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      const Index v = stack.back();
      auto& st = state[static_cast<std::size_t>(v)];
      if (st == 0) {
        st = 1;
        for (Index w = 0; w < d; ++w) {
          if (!adj(v, w)) continue;
          if (state[static_cast<std::size_t>(w)] == 1) return false;
          if (state[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
        }
      } else {
        if (st == 1) st = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

std::uint64_t edge_mask(const DagStructure& g) {
  std::uint64_t mask = 0;
  int bit = 0;
  for (Index i = 0; i < g.d(); ++i)
    for (Index j = 0; j < g.d(); ++j) {
      if (i == j) continue;
      if (g.edges(i, j)) mask |= (1ULL << bit);
      ++bit;
    }
  return mask;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("canonical structures have the documented shape") {
  const auto chain = make_chain(3);
  CHECK(chain.edge_count() == 2);
  CHECK(chain.has_edge(0, 1));
  CHECK(chain.has_edge(1, 2));
  CHECK(chain.labels == std::vector<std::string>{"X1", "X2", "X3"});

  const auto fork = make_fork(3);
  CHECK(fork.edge_count() == 2);
  CHECK(fork.has_edge(1, 0));
  CHECK(fork.has_edge(1, 2));

  const auto collider = make_collider();
  CHECK(collider.edge_count() == 2);
  CHECK(collider.has_edge(0, 1));
  CHECK(collider.has_edge(2, 1));

  // Five-node fork: center is the middle node, chains run outward both ways.
  const auto fork5 = make_fork(5);
  CHECK(fork5.has_edge(2, 1));
  CHECK(fork5.has_edge(1, 0));
  CHECK(fork5.has_edge(2, 3));
  CHECK(fork5.has_edge(3, 4));
  CHECK(fork5.edge_count() == 4);

  CHECK_THROWS_AS(make_chain(1), std::invalid_argument);
  CHECK_THROWS_AS(make_fork(2), std::invalid_argument);
}

TEST_CASE("acyclicity detection") {
  CHECK(is_acyclic(make_chain(4).edges));
  CHECK(is_acyclic(make_empty_dag(3).edges));

  BoolMatrix twocycle = BoolMatrix::Constant(2, 2, false);
  twocycle(0, 1) = twocycle(1, 0) = true;
  CHECK_FALSE(is_acyclic(twocycle));

  BoolMatrix loop3 = BoolMatrix::Constant(3, 3, false);
  loop3(0, 1) = loop3(1, 2) = loop3(2, 0) = true;
  CHECK_FALSE(is_acyclic(loop3));

  CHECK_THROWS_AS(make_dag(twocycle), std::invalid_argument);

  BoolMatrix self = BoolMatrix::Constant(2, 2, false);
  self(0, 0) = true;
  CHECK_THROWS_AS(make_dag(self), std::invalid_argument);
}

TEST_CASE("topological order breaks ties by ascending index") {
  CHECK(topological_order(make_chain(3)) == std::vector<Index>{0, 1, 2});
  CHECK(topological_order(reverse_dag(make_chain(3))) == std::vector<Index>{2, 1, 0});
  // Collider: both roots before the sink, roots in index order.
  CHECK(topological_order(make_collider()) == std::vector<Index>{0, 2, 1});
  CHECK(topological_order(make_empty_dag(4)) == std::vector<Index>{0, 1, 2, 3});
}

TEST_CASE("reverse is a transpose and an involution") {
  for (const auto& g : enumerate_dags(3)) {
    const auto r = reverse_dag(g);
    CHECK((r.edges.transpose().array() == g.edges.array()).all());
    CHECK(reverse_dag(r) == g);
  }
}

TEST_CASE("enumeration counts match the labelled-DAG recurrence") {
  CHECK(helpers::labelled_dag_count(3) == 25);
  CHECK(helpers::labelled_dag_count(4) == 543);
  for (Index d = 1; d <= 4; ++d)
    CHECK(static_cast<long long>(enumerate_dags(d).size()) == helpers::labelled_dag_count(d));
}

TEST_CASE("five-node enumeration matches the recurrence" * doctest::timeout(120)) {
  CHECK(static_cast<long long>(enumerate_dags(5).size()) == helpers::labelled_dag_count(5));
}

TEST_CASE("enumeration order is ascending edge-bitmask") {
  const auto dags2 = enumerate_dags(2);
  REQUIRE(dags2.size() == 3);
  CHECK(dags2[0].edge_count() == 0);
  CHECK(dags2[1].has_edge(0, 1));
  CHECK(dags2[2].has_edge(1, 0));

  const auto dags4 = enumerate_dags(4);
  std::uint64_t prev = 0;
  bool first = true;
  for (const auto& g : dags4) {
    const auto mask = edge_mask(g);
    if (!first) CHECK(mask > prev);
    prev = mask;
    first = false;
  }
}

TEST_CASE("enumeration agrees with an independent DFS filter") {
  // Accept every 4-node edge-mask whose graph the reference DFS calls acyclic;
  // the enumeration must return exactly that set, nothing more or less.
  std::set<std::uint64_t> expected;
  for (std::uint64_t mask = 0; mask < (1ULL << 12); ++mask) {
    BoolMatrix adj = BoolMatrix::Constant(4, 4, false);
    int bit = 0;
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) {
        if (i == j) continue;
        if (mask & (1ULL << bit)) adj(i, j) = true;
        ++bit;
      }
    if (dfs_acyclic(adj)) expected.insert(mask);
  }
  std::set<std::uint64_t> got;
  for (const auto& g : enumerate_dags(4)) got.insert(edge_mask(g));
  CHECK(got == expected);
  CHECK_THROWS_AS(enumerate_dags(6), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_dags(0), std::invalid_argument);
}

TEST_CASE("every enumerated graph is acyclic by the independent check") {
  for (const auto& g : enumerate_dags(4)) CHECK(dfs_acyclic(g.edges));
}

TEST_CASE("path pairs: one entry per power per reachable pair") {
  const auto chain = make_chain(3);
  const auto pairs = path_pairs(chain);
  // Power 1: the two edges; power 2: the end-to-end pair.
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<Index, Index>{0, 1});
  CHECK(pairs[1] == std::pair<Index, Index>{1, 2});
  CHECK(pairs[2] == std::pair<Index, Index>{0, 2});

  CHECK(path_pairs(make_empty_dag(3)).empty());

  // Collider: two edges, no longer paths.
  CHECK(path_pairs(make_collider()).size() == 2);
}

TEST_CASE("skeleton is symmetric and ignores direction") {
  const auto chain = make_chain(3);
  const auto s = skeleton(chain);
  CHECK((s.transpose().array() == s.array()).all());
  CHECK(s(0, 1));
  CHECK(s(1, 0));
  CHECK_FALSE(s(0, 2));
  CHECK((skeleton(reverse_dag(chain)).array() == s.array()).all());
}

TEST_CASE("parents and edge_count agree with the adjacency") {
  const auto collider = make_collider();
  CHECK(collider.parents(1) == std::vector<Index>{0, 2});
  CHECK(collider.parents(0).empty());
  CHECK(make_chain(4).edge_count() == 3);
}

}  // TEST_SUITE
