// Copyright 2026 The Persuasion Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persuasion/agent.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/synthesis.hpp"

using namespace persuasion;

TEST_CASE("four-stage solutions synthesize to trees matching the LP value") {
  for (const auto& id : {"ex1", "ex4"}) {
    const Instance inst = example_instance(id);
    const EnsesResult solved = solve_enses(inst);
    REQUIRE(solved.report.status == SolveStatus::optimal);
    const MechanismTree tree = enses_tree(inst, solved.solution);
    CHECK(validate_mechanism(inst, tree).ok());
    const EvaluationReport eval = evaluate(inst, tree);
    CHECK(eval.principal_value ==
          doctest::Approx(solved.value).epsilon(1e-6));
    CHECK(check_multistage_ic(inst, tree).ok());
  }
}

TEST_CASE("the truthful uninformative solution evaluates to the baseline") {
  for (const auto& id : {"ex1", "ex2", "ex4"}) {
    const Instance inst = example_instance(id);
    const MechanismTree tree = enses_tree(inst, trivial_enses_solution(inst));
    CHECK(validate_mechanism(inst, tree).ok());
    CHECK(evaluate(inst, tree).principal_value ==
          doctest::Approx(uninformative_baseline(inst)).epsilon(1e-9));
  }
}

TEST_CASE("kept zero branches carry uniform filler and evaluate the same") {
  const Instance inst = example_instance("ex1");
  const EnsesResult solved = solve_enses(inst);
  REQUIRE(solved.report.status == SolveStatus::optimal);
  SynthesisOptions keep;
  keep.zero_branch = SynthesisOptions::ZeroBranch::keep;
  const MechanismTree kept = enses_tree(inst, solved.solution, keep);
  CHECK(validate_mechanism(inst, kept).ok());
  CHECK(evaluate(inst, kept).principal_value ==
        doctest::Approx(solved.value).epsilon(1e-6));
}

TEST_CASE("corrupted flow triggers the degeneracy error") {
  const Instance inst = example_instance("ex1");
  EnsesSolution sol = trivial_enses_solution(inst);
  // Mass below a recommendation that is never sent.
  sol.phi[0][1][0][0][0] = 0.25;
  CHECK_THROWS_AS(enses_tree(inst, sol), DivisionDegeneracy);
}

TEST_CASE("IC policies synthesize to a two-stage tree with the LP value") {
  ExampleParams params;
  params.rho = {0.5, 0.5};
  const Instance inst = example_instance("ex1", params);
  const TwoStageSolution sol = solve_credible_ic(inst);
  REQUIRE(sol.report.status == SolveStatus::optimal);
  const MechanismTree tree = ic_two_stage_tree(inst, sol.policies);
  CHECK(validate_mechanism(inst, tree).ok());
  CHECK(evaluate(inst, tree).principal_value ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("ex2's IC optimum round-trips through the tree") {
  const Instance inst = example_instance("ex2");
  const TwoStageSolution sol = solve_credible_ic(inst);
  REQUIRE(sol.report.status == SolveStatus::optimal);
  const MechanismTree tree = ic_two_stage_tree(inst, sol.policies);
  CHECK(evaluate(inst, tree).principal_value ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("single aligned type: the tree reveals everything") {
  Instance inst = random_instance(5, 3, 1, 3);
  inst.principal_payoff.clear();
  for (const auto& row : inst.agent_payoff[0]) {
    inst.principal_payoff.push_back(row);
  }
  const TwoStageSolution sol = solve_credible_ic(inst);
  REQUIRE(sol.report.status == SolveStatus::optimal);
  const MechanismTree tree = ic_two_stage_tree(inst, sol.policies);
  CHECK(evaluate(inst, tree).principal_value ==
        doctest::Approx(sol.value).epsilon(1e-6));
}

TEST_CASE("policies violating the incentive families are rejected") {
  const Instance inst = example_instance("ex1");
  // Pure revelation toward the high-payoff actions ignores the first type's
  // incentives: recommending c is never optimal for t1.
  std::vector<Policy> bad(2, Policy(2, std::vector<double>(4, 0.0)));
  bad[0][0][2] = 0.5;  // (theta1, c)
  bad[0][1][3] = 0.5;  // (theta2, d)
  bad[1][0][2] = 0.5;
  bad[1][1][3] = 0.5;
  CHECK_THROWS_AS(ic_two_stage_tree(inst, bad), InfeasiblePolicies);
}

TEST_CASE("policy tree for a maximum independent set") {
  const Graph k3 = make_complete(3);
  const MechanismTree tree = mis_policy_tree(k3, {0});
  const Instance inst = reduce_mis(k3);
  CHECK(validate_mechanism(inst, tree).ok());
  CHECK(evaluate(inst, tree).principal_value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("cycle of five with a maximum independent pair") {
  const Graph c5 = make_cycle(5);
  const MisResult mis = max_independent_set(c5);
  REQUIRE(mis.size == 2);
  const MechanismTree tree = mis_policy_tree(c5, mis.witness);
  CHECK(evaluate(reduce_mis(c5), tree).principal_value ==
        doctest::Approx(2.0 / 5.0).epsilon(1e-9));
}

TEST_CASE("non-maximum independent sets yield their own fraction") {
  const Graph p4 = make_path(4);  // alpha = 2, e.g. {0, 2}
  const MechanismTree tree = mis_policy_tree(p4, {0});
  CHECK(evaluate(reduce_mis(p4), tree).principal_value ==
        doctest::Approx(1.0 / 4.0).epsilon(1e-9));
}

TEST_CASE("adjacent vertices are rejected") {
  CHECK_THROWS_AS(mis_policy_tree(make_complete(3), {0, 1}), NotIndependent);
}
