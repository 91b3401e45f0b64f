#pragma once

#include <string>
#include <utility>
#include <vector>

#include "varattack/types.hpp"

namespace varattack {

// Directed acyclic graph over d labelled nodes. edges(i, j) == true iff i -> j.
// Equality compares structure only, not labels.
struct DagStructure {
  BoolMatrix edges;
  std::vector<std::string> labels;

  Index d() const { return edges.rows(); }
  Index edge_count() const;
  bool has_edge(Index i, Index j) const { return edges(i, j); }
  std::vector<Index> parents(Index j) const;

  friend bool operator==(const DagStructure& a, const DagStructure& b) {
    return a.edges.rows() == b.edges.rows() &&
           (a.edges.array() == b.edges.array()).all();
  }
  friend bool operator!=(const DagStructure& a, const DagStructure& b) { return !(a == b); }
};

// DAG plus one real weight per edge; weights(i, j) == 0 wherever there is no edge.
struct WeightedDag {
  DagStructure structure;
  MatrixXd weights;
};

bool is_acyclic(const BoolMatrix& adj);

// Validates: square, no self-loops, acyclic. Empty labels -> default labels.
DagStructure make_dag(BoolMatrix edges, std::vector<std::string> labels = {});

DagStructure make_empty_dag(Index d);
DagStructure make_chain(Index d);     // X1 -> X2 -> ... -> Xd, d >= 2
DagStructure make_fork(Index d);      // chains out of center node ceil(d/2), d >= 3
DagStructure make_collider();         // X1 -> X2 <- X3
DagStructure reverse_dag(const DagStructure& g);

// Kahn's algorithm; ties broken by ascending node index. Throws on cyclic input.
std::vector<Index> topological_order(const DagStructure& g);

// All labelled DAGs on d nodes (1 <= d <= 5) in a fixed enumeration order:
// ascending bitmask over ordered node pairs (0,1), (0,2), ..., row-major.
// The position in this list is the graph's stable id.
std::vector<DagStructure> enumerate_dags(Index d);

// One ordered pair (i, j) per nonzero position of each boolean power A^k,
// k = 1..d-1; a pair connected by paths of several lengths appears once per
// such k. Order: k ascending, then row-major position.
std::vector<std::pair<Index, Index>> path_pairs(const DagStructure& g);

// Undirected adjacency: edges | edges^T.
BoolMatrix skeleton(const DagStructure& g);

}  // namespace varattack
