#include "varattack/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace varattack {

std::vector<std::string> default_labels(Index d) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) labels.push_back("X" + std::to_string(i + 1));
  return labels;
}

Index DagStructure::edge_count() const {
  return edges.cast<Index>().sum();
}

std::vector<Index> DagStructure::parents(Index j) const {
  std::vector<Index> out;
  for (Index i = 0; i < d(); ++i)
    if (edges(i, j)) out.push_back(i);
  return out;
}

bool is_acyclic(const BoolMatrix& adj) {
  if (adj.rows() != adj.cols()) throw std::invalid_argument("adjacency matrix must be square");
  const Index d = adj.rows();
  std::vector<Index> indeg(static_cast<std::size_t>(d), 0);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      if (adj(i, j)) ++indeg[static_cast<std::size_t>(j)];

  std::vector<bool> removed(static_cast<std::size_t>(d), false);
  Index processed = 0;
  for (;;) {
    Index next = -1;
    for (Index i = 0; i < d; ++i) {
      if (!removed[static_cast<std::size_t>(i)] && indeg[static_cast<std::size_t>(i)] == 0) {
        next = i;
        break;
      }
    }
    if (next < 0) break;
    removed[static_cast<std::size_t>(next)] = true;
    ++processed;
    for (Index j = 0; j < d; ++j)
      if (adj(next, j)) --indeg[static_cast<std::size_t>(j)];
  }
  return processed == d;
}

DagStructure make_dag(BoolMatrix edges, std::vector<std::string> labels) {
  if (edges.rows() != edges.cols()) throw std::invalid_argument("adjacency matrix must be square");
  const Index d = edges.rows();
  for (Index i = 0; i < d; ++i)
    if (edges(i, i)) throw std::invalid_argument("self-loops are not allowed");
  if (!is_acyclic(edges)) throw std::invalid_argument("adjacency matrix contains a cycle");
  if (labels.empty()) labels = default_labels(d);
  if (static_cast<Index>(labels.size()) != d)
    throw std::invalid_argument("label count must match node count");
  return DagStructure{std::move(edges), std::move(labels)};
}

DagStructure make_empty_dag(Index d) {
  if (d < 1) throw std::invalid_argument("need at least one node");
  return make_dag(BoolMatrix::Constant(d, d, false));
}

DagStructure make_chain(Index d) {
  if (d < 2) throw std::invalid_argument("a chain needs at least two nodes");
  BoolMatrix e = BoolMatrix::Constant(d, d, false);
  for (Index i = 0; i + 1 < d; ++i) e(i, i + 1) = true;
  return make_dag(std::move(e));
}

DagStructure make_fork(Index d) {
  if (d < 3) throw std::invalid_argument("a fork needs at least three nodes");
  const Index center = (d + 1) / 2 - 1;  // ceil(d/2), 0-based
  BoolMatrix e = BoolMatrix::Constant(d, d, false);
  for (Index i = center; i > 0; --i) e(i, i - 1) = true;
  for (Index i = center; i + 1 < d; ++i) e(i, i + 1) = true;
  return make_dag(std::move(e));
}

DagStructure make_collider() {
  BoolMatrix e = BoolMatrix::Constant(3, 3, false);
  e(0, 1) = true;
  e(2, 1) = true;
  return make_dag(std::move(e));
}

DagStructure reverse_dag(const DagStructure& g) {
  BoolMatrix e = g.edges.transpose();
  return DagStructure{std::move(e), g.labels};
}

std::vector<Index> topological_order(const DagStructure& g) {
  const Index d = g.d();
  std::vector<Index> indeg(static_cast<std::size_t>(d), 0);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i)
      if (g.edges(i, j)) ++indeg[static_cast<std::size_t>(j)];

  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(d));
  std::vector<bool> placed(static_cast<std::size_t>(d), false);
  while (static_cast<Index>(order.size()) < d) {
    Index next = -1;
    for (Index i = 0; i < d; ++i) {
      if (!placed[static_cast<std::size_t>(i)] && indeg[static_cast<std::size_t>(i)] == 0) {
        next = i;
        break;
      }
    }
    if (next < 0) throw std::invalid_argument("graph contains a cycle");
    placed[static_cast<std::size_t>(next)] = true;
    order.push_back(next);
    for (Index j = 0; j < d; ++j)
      if (g.edges(next, j)) --indeg[static_cast<std::size_t>(j)];
  }
  return order;
}

namespace {

// Acyclicity of a <=5-node adjacency packed row-major into a bitmask.
bool mask_is_acyclic(unsigned mask, Index d) {
  unsigned rows[5] = {0, 0, 0, 0, 0};
  int bit = 0;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      if (i == j) continue;
      if (mask & (1u << bit)) rows[i] |= (1u << j);
      ++bit;
    }
  unsigned alive = (1u << d) - 1;
  for (Index round = 0; round < d; ++round) {
    unsigned pointed = 0;
    for (Index i = 0; i < d; ++i)
      if (alive & (1u << i)) pointed |= rows[i] & alive;
    unsigned sources = alive & ~pointed;
    if (sources == 0) return alive == 0;
    alive &= ~sources;
  }
  return alive == 0;
}

}  // namespace

std::vector<DagStructure> enumerate_dags(Index d) {
  if (d < 1 || d > 5)
    throw std::invalid_argument("exhaustive enumeration is limited to 1..5 nodes");
  const int bits = static_cast<int>(d * (d - 1));
  std::vector<DagStructure> out;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    if (!mask_is_acyclic(mask, d)) continue;
    BoolMatrix e = BoolMatrix::Constant(d, d, false);
    int bit = 0;
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        if (i == j) continue;
        if (mask & (1u << bit)) e(i, j) = true;
        ++bit;
      }
    out.push_back(DagStructure{std::move(e), default_labels(d)});
  }
  return out;
}

std::vector<std::pair<Index, Index>> path_pairs(const DagStructure& g) {
  const Index d = g.d();
  std::vector<std::pair<Index, Index>> pairs;
  BoolMatrix power = g.edges;
  for (Index k = 1; k <= d - 1; ++k) {
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        if (power(i, j)) pairs.emplace_back(i, j);
    if (k == d - 1) break;
    BoolMatrix next = BoolMatrix::Constant(d, d, false);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        bool any = false;
        for (Index m = 0; m < d && !any; ++m) any = power(i, m) && g.edges(m, j);
        next(i, j) = any;
      }
    power = std::move(next);
  }
  return pairs;
}

BoolMatrix skeleton(const DagStructure& g) {
  const Index d = g.d();
  BoolMatrix s = BoolMatrix::Constant(d, d, false);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (g.edges(i, j)) {
        s(i, j) = true;
        s(j, i) = true;
      }
  return s;
}

}  // namespace varattack
