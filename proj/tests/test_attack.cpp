#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helpers.hpp"
#include "varattack/attack.hpp"

using namespace varattack;

namespace {

DataMatrix with_variances(const std::vector<double>& vars, Index n, std::uint64_t seed) {
  auto data = helpers::noise_data(static_cast<Index>(vars.size()), n, seed);
  for (Index j = 0; j < data.d(); ++j) {
    const double current = column_variance(data, j);
    data = rescale_column(data, j, std::sqrt(vars[static_cast<std::size_t>(j)] / current));
  }
  return data;
}

}  // namespace

TEST_SUITE("attack") {

TEST_CASE("kind names round-trip") {
  for (auto k : {StructureKind::Chain, StructureKind::Fork, StructureKind::Collider})
    CHECK(structure_kind_from_string(to_string(k)) == k);
  for (auto k : {AttackKind::Reverse, AttackKind::ToFork, AttackKind::ToCollider,
                 AttackKind::ToChain})
    CHECK(attack_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(structure_kind_from_string("triangle"), std::invalid_argument);
  CHECK_THROWS_AS(attack_kind_from_string("to_cycle"), std::invalid_argument);
}

TEST_CASE("the seven conversions exist, the five impossible ones throw") {
  CHECK(recipe(StructureKind::Chain, AttackKind::Reverse).target ==
        reverse_dag(make_chain(3)));
  CHECK(recipe(StructureKind::Chain, AttackKind::ToFork).target == make_fork(3));
  CHECK(recipe(StructureKind::Chain, AttackKind::ToCollider).target == make_collider());
  CHECK(recipe(StructureKind::Fork, AttackKind::ToChain).target == make_chain(3));
  CHECK(recipe(StructureKind::Fork, AttackKind::ToCollider).target == make_collider());
  CHECK(recipe(StructureKind::Collider, AttackKind::ToChain).target == make_chain(3));
  CHECK(recipe(StructureKind::Collider, AttackKind::ToFork).target == make_fork(3));

  CHECK_THROWS_AS(recipe(StructureKind::Chain, AttackKind::ToChain), std::invalid_argument);
  CHECK_THROWS_AS(recipe(StructureKind::Fork, AttackKind::Reverse), std::invalid_argument);
  CHECK_THROWS_AS(recipe(StructureKind::Fork, AttackKind::ToFork), std::invalid_argument);
  CHECK_THROWS_AS(recipe(StructureKind::Collider, AttackKind::Reverse),
                  std::invalid_argument);
  CHECK_THROWS_AS(recipe(StructureKind::Collider, AttackKind::ToCollider),
                  std::invalid_argument);
}

TEST_CASE("conversions that break an independence class force the extra edge") {
  CHECK_FALSE(recipe(StructureKind::Chain, AttackKind::Reverse).adds_extra_edge);
  CHECK_FALSE(recipe(StructureKind::Chain, AttackKind::ToFork).adds_extra_edge);
  CHECK(recipe(StructureKind::Chain, AttackKind::ToCollider).adds_extra_edge);
  CHECK_FALSE(recipe(StructureKind::Fork, AttackKind::ToChain).adds_extra_edge);
  CHECK(recipe(StructureKind::Fork, AttackKind::ToCollider).adds_extra_edge);
  CHECK(recipe(StructureKind::Collider, AttackKind::ToChain).adds_extra_edge);
  CHECK(recipe(StructureKind::Collider, AttackKind::ToFork).adds_extra_edge);
}

TEST_CASE("scaling rule on a reversal: variances become (12, 6, 3)") {
  const auto data = with_variances({1.0, 2.0, 3.0}, 6000, 51);
  const auto plan = plan_perfect_attack(data, make_chain(3), reverse_dag(make_chain(3)), 2.0);
  const auto attacked = apply_attack(data, plan);
  CHECK(column_variance(attacked, 0) == doctest::Approx(12.0).epsilon(1e-9));
  CHECK(column_variance(attacked, 1) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(column_variance(attacked, 2) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(plan.expected_prediction == reverse_dag(make_chain(3)));
  CHECK(plan.scales[2] == 1.0);
}

TEST_CASE("scaling rule on a collider target: variances become (1, 6, 3)") {
  const auto data = with_variances({1.0, 2.0, 3.0}, 6000, 52);
  const auto plan = plan_perfect_attack(data, make_chain(3), make_collider(), 2.0);
  const auto attacked = apply_attack(data, plan);
  CHECK(column_variance(attacked, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(column_variance(attacked, 1) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(column_variance(attacked, 2) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("a target whose constraints already hold gets an all-ones plan") {
  // (3, 2, 1) already increases along every path of the reversed chain.
  const auto data = with_variances({3.0, 2.0, 1.0}, 3000, 53);
  const auto plan = plan_perfect_attack(data, make_chain(3), reverse_dag(make_chain(3)), 2.0);
  CHECK((plan.scales.array() == 1.0).all());

  CHECK_THROWS_AS(plan_perfect_attack(data, make_chain(3), make_chain(3), 2.0),
                  std::invalid_argument);
}

TEST_CASE("margins at or below one are rejected") {
  const auto data = with_variances({1.0, 2.0, 3.0}, 500, 54);
  CHECK_THROWS_AS(plan_perfect_attack(data, make_chain(3), reverse_dag(make_chain(3)), 1.0),
                  std::invalid_argument);
}

TEST_CASE("the extra edge points at the higher post-attack variance") {
  // Chain data (1, 2, 3) turned into a collider ends at (1, 6, 3):
  // Var(X1) < Var(X3), so the forced edge is X1 -> X3.
  const auto data = with_variances({1.0, 2.0, 3.0}, 3000, 55);
  const auto plan = plan_recipe_attack(data, StructureKind::Chain, AttackKind::ToCollider, 2.0);
  CHECK(plan.expected_prediction.has_edge(0, 1));
  CHECK(plan.expected_prediction.has_edge(2, 1));
  CHECK(plan.expected_prediction.has_edge(0, 2));
  CHECK(plan.expected_prediction.edge_count() == 3);
}

TEST_CASE("collider-to-fork plans order the two leaves") {
  const auto collider_scm = make_uniform_scm(make_collider(), 1.0, 1.0);
  const auto data = sample(collider_scm, 5000, 56);
  const auto plan = plan_recipe_attack(data, StructureKind::Collider, AttackKind::ToFork, 2.0);
  const auto attacked = apply_attack(data, plan);
  const auto vars = column_variances(attacked);
  CHECK(vars[1] * 2.0 <= vars[0] * (1.0 + 1e-9));
  CHECK(vars[0] * 2.0 <= vars[2] * (1.0 + 1e-9));
}

TEST_CASE("imperfect plans touch only the accessible columns") {
  const auto data = helpers::chain_data(3, 1000, 57);
  const auto target = reverse_dag(make_chain(3));
  const auto plan = imperfect_attack(data, make_chain(3), target, {0}, 4.0);
  CHECK(plan.scales[0] == 4.0);
  CHECK(plan.scales[1] == 1.0);
  CHECK(plan.scales[2] == 1.0);
  CHECK(plan.accessible == std::vector<Index>{0});
  CHECK(plan.expected_prediction == target);

  const auto attacked = apply_attack(data, plan);
  CHECK((attacked.values.col(1).array() == data.values.col(1).array()).all());
  CHECK(column_variance(attacked, 0) ==
        doctest::Approx(16.0 * column_variance(data, 0)).epsilon(1e-12));
}

TEST_CASE("imperfect attack guards") {
  const auto data = helpers::chain_data(3, 500, 58);
  const auto target = reverse_dag(make_chain(3));
  CHECK_THROWS_AS(imperfect_attack(data, make_chain(3), target, {}, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(imperfect_attack(data, make_chain(3), target, {3}, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(imperfect_attack(data, make_chain(3), target, {0, 1}, 2.0),
                  std::invalid_argument);  // d-1 columns renders the perfect scenario
  CHECK_THROWS_AS(imperfect_attack(data, make_chain(3), target, {0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("apply_attack rejects tampering outside the plan") {
  const auto data = helpers::chain_data(3, 500, 59);
  auto plan = imperfect_attack(data, make_chain(3), reverse_dag(make_chain(3)), {0}, 2.0);
  plan.scales[1] = 3.0;  // column 1 is not accessible
  CHECK_THROWS_AS(apply_attack(data, plan), std::invalid_argument);

  auto negative = imperfect_attack(data, make_chain(3), reverse_dag(make_chain(3)), {0}, 2.0);
  negative.scales[0] = -2.0;
  CHECK_THROWS_AS(apply_attack(data, negative), std::invalid_argument);
}

TEST_CASE("run_attack flips a chain end to end") {
  const auto data = helpers::chain_data(3, 4000, 60);
  const auto plan = plan_recipe_attack(data, StructureKind::Chain, AttackKind::Reverse, 2.0);
  const auto outcome = run_attack(data, plan, NotearsConfig{});
  CHECK(outcome.success);
  CHECK(outcome.skeleton_match);
  CHECK(outcome.shd_to_expected == 0);
  CHECK(outcome.predicted == plan.expected_prediction);
  // The data was perfectly anti-sorted for the target before, sorted after.
  CHECK(outcome.varsort_before == 0.0);
  CHECK(outcome.varsort_after == 1.0);
}

TEST_CASE("varsortability bookkeeping matches direct computation") {
  const auto data = helpers::chain_data(3, 2000, 61);
  const auto plan = plan_recipe_attack(data, StructureKind::Chain, AttackKind::ToFork, 2.0);
  const auto outcome = run_attack(data, plan, NotearsConfig{});
  CHECK(outcome.varsort_before == varsortability(data, plan.target).value);
  CHECK(outcome.varsort_after ==
        varsortability(apply_attack(data, plan), plan.target).value);
}

TEST_CASE("scale search stops at the first workable scale") {
  const auto data = helpers::chain_data(3, 4000, 62);
  const auto target = reverse_dag(make_chain(3));
  // 1.01 barely changes the data; large entries later in the grid do the job.
  const std::vector<double> grid{1.01, 3.0, 6.0, 12.0};
  const auto result = scale_search(data, make_chain(3), target, {0}, grid, NotearsConfig{});
  if (result.hit) {
    CHECK(result.solver_calls == static_cast<int>(result.failures.size()) + 1);
    CHECK(result.solver_calls <= static_cast<int>(grid.size()));
    CHECK(result.hit->success);
    // Every earlier grid entry genuinely failed.
    for (const auto& f : result.failures) CHECK_FALSE(f.success);
  } else {
    CHECK(result.solver_calls == static_cast<int>(grid.size()));
    CHECK(result.failures.size() == grid.size());
  }
}

}  // TEST_SUITE
