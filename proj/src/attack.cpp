#include "varattack/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varattack {

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::Chain: return "chain";
    case StructureKind::Fork: return "fork";
    case StructureKind::Collider: return "collider";
  }
  throw std::logic_error("unreachable");
}

std::string to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Reverse: return "reverse";
    case AttackKind::ToFork: return "to_fork";
    case AttackKind::ToCollider: return "to_collider";
    case AttackKind::ToChain: return "to_chain";
  }
  throw std::logic_error("unreachable");
}

StructureKind structure_kind_from_string(const std::string& s) {
  if (s == "chain") return StructureKind::Chain;
  if (s == "fork") return StructureKind::Fork;
  if (s == "collider") return StructureKind::Collider;
  throw std::invalid_argument("unknown structure kind: " + s);
}

AttackKind attack_kind_from_string(const std::string& s) {
  if (s == "reverse") return AttackKind::Reverse;
  if (s == "to_fork") return AttackKind::ToFork;
  if (s == "to_collider") return AttackKind::ToCollider;
  if (s == "to_chain") return AttackKind::ToChain;
  throw std::invalid_argument("unknown attack kind: " + s);
}

DagStructure canonical_structure(StructureKind kind) {
  switch (kind) {
    case StructureKind::Chain: return make_chain(3);
    case StructureKind::Fork: return make_fork(3);
    case StructureKind::Collider: return make_collider();
  }
  throw std::logic_error("unreachable");
}

namespace {

enum class PathClass { Screened, Collider };

struct PathShape {
  PathClass cls;
  Index middle;
};

// Classifies a 3-node, 2-edge graph by the node both edges touch: two heads
// meeting there form a collider (outer pair marginally independent), anything
// else screens the outer pair (independent given the middle).
std::optional<PathShape> classify_path(const DagStructure& g) {
  if (g.d() != 3 || g.edge_count() != 2) return std::nullopt;
  for (Index m = 0; m < 3; ++m) {
    Index touching = 0, incoming = 0;
    for (Index o = 0; o < 3; ++o) {
      if (o == m) continue;
      if (g.edges(o, m)) {
        ++touching;
        ++incoming;
      }
      if (g.edges(m, o)) ++touching;
    }
    if (touching == 2)
      return PathShape{incoming == 2 ? PathClass::Collider : PathClass::Screened, m};
  }
  return std::nullopt;
}

// The prediction the attacked solver is steered toward: the target itself,
// plus an extra edge across the outer pair whenever source and target fall in
// different independence classes. The edge runs from the lower-variance
// endpoint to the higher-variance one (post-attack variances).
DagStructure expected_prediction_for(const DagStructure& source, const DagStructure& target,
                                     const VectorXd& post_vars) {
  const auto s = classify_path(source);
  const auto t = classify_path(target);
  if (!s || !t || s->middle != t->middle || s->cls == t->cls) return target;

  std::vector<Index> outer;
  for (Index i = 0; i < 3; ++i)
    if (i != t->middle) outer.push_back(i);
  Index lo = outer[0], hi = outer[1];
  if (post_vars[lo] > post_vars[hi]) std::swap(lo, hi);

  DagStructure expected = target;
  expected.edges(lo, hi) = true;
  return expected;
}

VectorXd eq1_scales(const DataMatrix& data, const DagStructure& target, double margin,
                    VectorXd& vars) {
  const Index d = data.d();
  vars = column_variances(data);
  VectorXd scales = VectorXd::Ones(d);
  for (Index node : topological_order(target)) {
    const auto parents = target.parents(node);
    if (parents.empty()) continue;
    double max_parent = 0.0;
    for (Index p : parents) max_parent = std::max(max_parent, vars[p]);
    if (vars[node] > max_parent) continue;
    if (!(vars[node] > 0.0))
      throw std::runtime_error("cannot rescale a zero-variance column");
    const double target_var = margin * max_parent;
    scales[node] *= std::sqrt(target_var / vars[node]);
    vars[node] = target_var;
  }
  return scales;
}

void check_plan_inputs(const DataMatrix& data, const DagStructure& source,
                       const DagStructure& target) {
  if (source.d() != target.d() || source.d() != data.d())
    throw std::invalid_argument("data, source and target must share the node set");
  if (source == target) throw std::invalid_argument("target must differ from the source");
}

std::vector<Index> all_columns(Index d) {
  std::vector<Index> out(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace

RecipeSpec recipe(StructureKind source_kind, AttackKind attack_kind) {
  const DagStructure source = canonical_structure(source_kind);
  DagStructure target = source;
  switch (source_kind) {
    case StructureKind::Chain:
      if (attack_kind == AttackKind::Reverse) target = reverse_dag(make_chain(3));
      else if (attack_kind == AttackKind::ToFork) target = make_fork(3);
      else if (attack_kind == AttackKind::ToCollider) target = make_collider();
      else throw std::invalid_argument("a chain cannot be converted to a chain");
      break;
    case StructureKind::Fork:
      if (attack_kind == AttackKind::ToChain) target = make_chain(3);
      else if (attack_kind == AttackKind::ToCollider) target = make_collider();
      else throw std::invalid_argument("unsupported fork conversion: " + to_string(attack_kind));
      break;
    case StructureKind::Collider:
      if (attack_kind == AttackKind::ToChain) target = make_chain(3);
      else if (attack_kind == AttackKind::ToFork) target = make_fork(3);
      else throw std::invalid_argument("unsupported collider conversion: " + to_string(attack_kind));
      break;
  }

  RecipeSpec spec;
  spec.target = target;
  // Canonical orientation X1 -> X3; plans recompute it from the actual data.
  const VectorXd canonical_vars = (VectorXd(3) << 1.0, 2.0, 3.0).finished();
  spec.expected_prediction = expected_prediction_for(source, target, canonical_vars);
  spec.adds_extra_edge = spec.expected_prediction != target;
  return spec;
}

AttackPlan plan_perfect_attack(const DataMatrix& data, const DagStructure& source,
                               const DagStructure& target, double margin) {
  check_plan_inputs(data, source, target);
  if (!(margin > 1.0)) throw std::invalid_argument("margin must exceed 1");

  VectorXd vars;
  VectorXd scales = eq1_scales(data, target, margin, vars);
  AttackPlan plan;
  plan.source = source;
  plan.target = target;
  plan.expected_prediction = expected_prediction_for(source, target, vars);
  plan.scales = std::move(scales);
  plan.accessible = all_columns(data.d());
  return plan;
}

AttackPlan plan_recipe_attack(const DataMatrix& data, StructureKind source_kind,
                              AttackKind attack_kind, double margin) {
  if (data.d() != 3) throw std::invalid_argument("recipes are defined on three nodes");
  if (!(margin > 1.0)) throw std::invalid_argument("margin must exceed 1");
  const DagStructure source = canonical_structure(source_kind);
  const RecipeSpec spec = recipe(source_kind, attack_kind);

  VectorXd vars;
  VectorXd scales = eq1_scales(data, spec.target, margin, vars);

  // Collider -> fork additionally separates the two leaves: Var(X3) is raised
  // to margin * Var(X1) unless it already clears that bound, making the
  // ordering X2 < X1 < X3 strict rather than a tie.
  if (source_kind == StructureKind::Collider && attack_kind == AttackKind::ToFork &&
      vars[2] < margin * vars[0]) {
    const double target_var = margin * vars[0];
    scales[2] *= std::sqrt(target_var / vars[2]);
    vars[2] = target_var;
  }

  AttackPlan plan;
  plan.source = source;
  plan.target = spec.target;
  plan.expected_prediction = expected_prediction_for(source, spec.target, vars);
  plan.scales = std::move(scales);
  plan.accessible = all_columns(3);
  return plan;
}

AttackPlan imperfect_attack(const DataMatrix& data, const DagStructure& source,
                            const DagStructure& target,
                            const std::vector<Index>& accessible, double scale) {
  check_plan_inputs(data, source, target);
  if (accessible.empty()) throw std::invalid_argument("accessible column set is empty");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("scale must be positive and finite");
  const Index d = data.d();
  std::vector<Index> cols = accessible;
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  for (Index c : cols)
    if (c < 0 || c >= d) throw std::invalid_argument("accessible column out of range");
  if (static_cast<Index>(cols.size()) >= d - 1)
    throw std::invalid_argument(
        "an imperfect attack reaches fewer than d-1 columns; use a perfect plan instead");

  VectorXd scales = VectorXd::Ones(d);
  for (Index c : cols) scales[c] = scale;

  VectorXd post_vars = column_variances(data);
  for (Index c : cols) post_vars[c] *= scale * scale;

  AttackPlan plan;
  plan.source = source;
  plan.target = target;
  plan.expected_prediction = expected_prediction_for(source, target, post_vars);
  plan.scales = std::move(scales);
  plan.accessible = std::move(cols);
  return plan;
}

DataMatrix apply_attack(const DataMatrix& data, const AttackPlan& plan) {
  const Index d = data.d();
  if (plan.scales.size() != d)
    throw std::invalid_argument("plan and data dimension mismatch");
  std::vector<bool> reachable(static_cast<std::size_t>(d), false);
  for (Index c : plan.accessible) {
    if (c < 0 || c >= d) throw std::invalid_argument("accessible column out of range");
    reachable[static_cast<std::size_t>(c)] = true;
  }
  for (Index i = 0; i < d; ++i) {
    if (!(plan.scales[i] > 0.0) || !std::isfinite(plan.scales[i]))
      throw std::invalid_argument("plan contains a nonpositive or nonfinite scale");
    if (!reachable[static_cast<std::size_t>(i)] && plan.scales[i] != 1.0)
      throw std::invalid_argument("plan rescales a column outside the accessible set");
  }
  DataMatrix out = data;
  for (Index i = 0; i < d; ++i)
    if (plan.scales[i] != 1.0) out.values.col(i) *= plan.scales[i];
  return out;
}

AttackOutcome run_attack(const DataMatrix& data, const AttackPlan& plan,
                         const NotearsConfig& config) {
  AttackOutcome outcome;
  outcome.scales_used = plan.scales;
  const bool target_has_edges = plan.target.edge_count() > 0;
  outcome.varsort_before = target_has_edges
                               ? varsortability(data, plan.target).value
                               : std::numeric_limits<double>::quiet_NaN();

  const DataMatrix attacked = apply_attack(data, plan);
  outcome.varsort_after = target_has_edges
                              ? varsortability(attacked, plan.target).value
                              : std::numeric_limits<double>::quiet_NaN();

  const SolveResult fit = solve(attacked, config);
  outcome.predicted = fit.graph;
  outcome.success = fit.graph == plan.expected_prediction;
  outcome.skeleton_match =
      (skeleton(fit.graph).array() == skeleton(plan.expected_prediction).array()).all();
  outcome.shd_to_expected = structural_hamming_distance(fit.graph, plan.expected_prediction);
  return outcome;
}

ScaleSearchResult scale_search(const DataMatrix& data, const DagStructure& source,
                               const DagStructure& target,
                               const std::vector<Index>& accessible,
                               const std::vector<double>& grid,
                               const NotearsConfig& config) {
  if (grid.empty()) throw std::invalid_argument("scale grid is empty");
  ScaleSearchResult result;
  for (double scale : grid) {
    const AttackPlan plan = imperfect_attack(data, source, target, accessible, scale);
    AttackOutcome outcome = run_attack(data, plan, config);
    ++result.solver_calls;
    if (outcome.success) {
      result.hit = std::move(outcome);
      result.hit_scale = scale;
      return result;
    }
    result.failures.push_back(std::move(outcome));
  }
  return result;
}

}  // namespace varattack
