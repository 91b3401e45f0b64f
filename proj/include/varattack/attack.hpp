#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/metrics.hpp"
#include "varattack/notears.hpp"
#include "varattack/scm.hpp"
#include "varattack/types.hpp"

namespace varattack {

enum class StructureKind { Chain, Fork, Collider };
enum class AttackKind { Reverse, ToFork, ToCollider, ToChain };

std::string to_string(StructureKind k);
std::string to_string(AttackKind k);
StructureKind structure_kind_from_string(const std::string& s);
AttackKind attack_kind_from_string(const std::string& s);

// The canonical 3-node source structures.
DagStructure canonical_structure(StructureKind kind);

// Column rescaling plan: multiply column i of the data by scales[i].
// scales[i] == 1.0 for every column outside `accessible`.
// expected_prediction is the target plus any forced extra edge.
struct AttackPlan {
  DagStructure source;
  DagStructure target;
  DagStructure expected_prediction;
  VectorXd scales;
  std::vector<Index> accessible;
};

struct RecipeSpec {
  DagStructure target;
  DagStructure expected_prediction;  // canonical orientation of any extra edge
  bool adds_extra_edge = false;
};

// The seven canonical 3-node conversions: chain -> {reverse, fork, collider},
// fork -> {chain, collider}, collider -> {chain, fork}. Conversions that break
// the conditional-independence class (anything into or out of a collider)
// force an extra X1-X3 edge in the expected prediction. Its orientation is
// finalized per dataset when a plan is built: lower post-attack variance
// endpoint -> higher.
RecipeSpec recipe(StructureKind source_kind, AttackKind attack_kind);

// Rescaling rule: visit the target's nodes in topological order; whenever the
// current variance of a node with parents is not strictly above every parent's
// variance, scale the node so its variance becomes margin * (max parent
// variance). margin > 1. A target whose constraints already hold gets an
// all-ones plan.
AttackPlan plan_perfect_attack(const DataMatrix& data, const DagStructure& source,
                               const DagStructure& target, double margin);

// plan_perfect_attack specialized to a recipe. The collider -> fork conversion
// additionally raises Var(X3) to margin * Var(X1) so the two fork leaves are
// strictly ordered; the other six use the plain rule.
AttackPlan plan_recipe_attack(const DataMatrix& data, StructureKind source_kind,
                              AttackKind attack_kind, double margin);

// Scale only the accessible columns (a nonempty proper subset with fewer than
// d-1 members) by the given factor.
AttackPlan imperfect_attack(const DataMatrix& data, const DagStructure& source,
                            const DagStructure& target,
                            const std::vector<Index>& accessible, double scale);

// Applies plan.scales to the data; rejects plans whose scales are not positive
// or that touch an inaccessible column.
DataMatrix apply_attack(const DataMatrix& data, const AttackPlan& plan);

struct AttackOutcome {
  DagStructure predicted;
  bool success = false;        // predicted == expected_prediction
  bool skeleton_match = false; // undirected structure matches expected
  double varsort_before = 0.0; // w.r.t. target, pre-attack
  double varsort_after = 0.0;  // w.r.t. target, post-attack
  int shd_to_expected = 0;
  VectorXd scales_used;
};

AttackOutcome run_attack(const DataMatrix& data, const AttackPlan& plan,
                         const NotearsConfig& config);

struct ScaleSearchResult {
  std::optional<AttackOutcome> hit;   // first success, if any
  double hit_scale = 0.0;
  std::vector<AttackOutcome> failures;
  int solver_calls = 0;
};

// Walks the scale grid in order and stops at the first successful attack, so
// at most |grid| solver invocations are spent.
ScaleSearchResult scale_search(const DataMatrix& data, const DagStructure& source,
                               const DagStructure& target,
                               const std::vector<Index>& accessible,
                               const std::vector<double>& grid,
                               const NotearsConfig& config);

}  // namespace varattack
