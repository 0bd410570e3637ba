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

#include <random>

#include "persuasion/errors.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/lp.hpp"

using namespace persuasion;

namespace {

Instance aligned_single_type(std::uint64_t seed) {
  Instance inst = random_instance(seed, 3, 1, 3);
  inst.principal_payoff.clear();
  for (const auto& row : inst.agent_payoff[0]) {
    inst.principal_payoff.push_back(row);
  }
  return inst;
}

std::vector<Policy> random_feasible_policies(const Instance& inst,
                                             std::uint64_t seed) {
  // Random conditional rows scaled by the prior; marginals hold by
  // construction, incentives are whatever they happen to be.
  std::mt19937_64 rng(seed);
  std::vector<Policy> policies(inst.num_types());
  for (int t = 0; t < inst.num_types(); ++t) {
    policies[t].assign(inst.num_states(),
                       std::vector<double>(inst.num_actions(), 0.0));
    for (int s = 0; s < inst.num_states(); ++s) {
      double total = 0.0;
      std::vector<double> w(inst.num_actions());
      for (double& x : w) {
        x = 0.01 + static_cast<double>(rng() % 1000);
        total += x;
      }
      for (int a = 0; a < inst.num_actions(); ++a) {
        policies[t][s][a] = inst.prior[s] * w[a] / total;
      }
    }
  }
  return policies;
}

double expected_max_principal(const Instance& inst) {
  double total = 0.0;
  for (int s = 0; s < inst.num_states(); ++s) {
    double best = inst.v(s, 0);
    for (int a = 1; a < inst.num_actions(); ++a) {
      best = std::max(best, inst.v(s, a));
    }
    total += inst.prior[s] * best;
  }
  return total;
}

}  // namespace

TEST_CASE("bounded maximization hits the bound") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0.0, kInf);
  lp.add_objective_term(x, 1.0);
  lp.add_constraint({{x, 1.0}}, LinearProgram::Rel::le, 3.0);
  const SolveReport report = solve_lp(lp);
  REQUIRE(report.status == SolveStatus::optimal);
  CHECK(report.objective_value == doctest::Approx(3.0));
  CHECK(report.assignment[x] == doctest::Approx(3.0));
}

TEST_CASE("contradictory constraints are infeasible") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0.0, kInf);
  lp.add_objective_term(x, 1.0);
  lp.add_constraint({{x, 1.0}}, LinearProgram::Rel::le, -1.0);
  CHECK(solve_lp(lp).status == SolveStatus::infeasible);
}

TEST_CASE("missing upper bounds are unbounded") {
  LinearProgram lp;
  const int x = lp.add_variable("x", 0.0, kInf);
  lp.add_objective_term(x, 1.0);
  lp.add_constraint({{x, 1.0}}, LinearProgram::Rel::ge, 0.0);
  CHECK(solve_lp(lp).status == SolveStatus::unbounded);
}

TEST_CASE("equalities, free variables and two-sided bounds") {
  LinearProgram lp;
  const int x = lp.add_variable("x", -kInf, kInf);
  const int y = lp.add_variable("y", -2.0, 5.0);
  lp.add_objective_term(x, 1.0);
  lp.add_objective_term(y, 2.0);
  lp.add_constraint({{x, 1.0}, {y, 1.0}}, LinearProgram::Rel::eq, 1.0);
  const SolveReport report = solve_lp(lp);
  REQUIRE(report.status == SolveStatus::optimal);
  // y goes to its upper bound, x balances the equality.
  CHECK(report.assignment[y] == doctest::Approx(5.0));
  CHECK(report.assignment[x] == doctest::Approx(-4.0));
  CHECK(report.objective_value == doctest::Approx(6.0));
  CHECK(max_violation(lp, report.assignment) <= 1e-7);
}

TEST_CASE("unknown backend ids surface as errors") {
  LinearProgram lp;
  lp.add_variable("x", 0.0, 1.0);
  CHECK(solve_lp_with(lp, "no-such-solver").status == SolveStatus::error);
}

TEST_CASE("LP text dump is well formed") {
  const std::string text = to_cplex_lp(credible_ic_lp(example_instance("ex1")));
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("pi_0_0_0") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("non-credible optimum of ex1 collapses to the trade type") {
  const TwoStageSolution sol = solve_noncredible(example_instance("ex1"));
  REQUIRE(sol.report.status == SolveStatus::optimal);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("non-credible LP has the documented size on ex1") {
  const LinearProgram lp = noncredible_lp(example_instance("ex1"));
  CHECK(lp.num_vars() == 32);  // 2*2*4 policies + 4*4 auxiliaries
  int dev = 0, zub = 0, marginal = 0;
  for (const auto& c : lp.constraints) {
    if (c.name.rfind("dev", 0) == 0) ++dev;
    if (c.name.rfind("zub", 0) == 0) ++zub;
    if (c.name.rfind("marginal", 0) == 0) ++marginal;
  }
  CHECK(dev == 4);
  CHECK(zub == 64);
  CHECK(marginal == 4);
}

TEST_CASE("aligned single-type instances reveal everything") {
  const Instance inst = aligned_single_type(11);
  const double expected = expected_max_principal(inst);
  const TwoStageSolution nc = solve_noncredible(inst);
  const TwoStageSolution ic = solve_credible_ic(inst);
  REQUIRE(nc.report.status == SolveStatus::optimal);
  REQUIRE(ic.report.status == SolveStatus::optimal);
  CHECK(nc.value == doctest::Approx(expected).epsilon(1e-7));
  CHECK(ic.value == doctest::Approx(nc.value).epsilon(1e-7));
}

TEST_CASE("IC optimum of ex1 equals the trade type's probability") {
  for (double p : {0.25, 0.5, 0.9}) {
    ExampleParams params;
    params.rho = {p, 1 - p};
    const TwoStageSolution sol =
        solve_credible_ic(example_instance("ex1", params));
    REQUIRE(sol.report.status == SolveStatus::optimal);
    CHECK(sol.value == doctest::Approx(1 - p).epsilon(1e-6));
  }
}

TEST_CASE("IC optimum of ex2 splits the types") {
  const TwoStageSolution sol = solve_credible_ic(example_instance("ex2"));
  REQUIRE(sol.report.status == SolveStatus::optimal);
  CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("four-stage LP values on the bundled instances") {
  const EnsesResult ex1 = solve_enses(example_instance("ex1"));
  REQUIRE(ex1.report.status == SolveStatus::optimal);
  CHECK(ex1.value == doctest::Approx(1.0).epsilon(1e-6));

  const double delta = 10.0 / 10001.0;
  const EnsesResult ex3 = solve_enses(example_instance("ex3"));
  REQUIRE(ex3.report.status == SolveStatus::optimal);
  CHECK(ex3.value >= 1.0 - delta / 3.0 - 1e-6);

  const EnsesResult ex4 = solve_enses(example_instance("ex4"));
  REQUIRE(ex4.report.status == SolveStatus::optimal);
  CHECK(ex4.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("the truthful uninformative point is always feasible") {
  for (const auto& id : {"ex1", "ex2", "ex4"}) {
    const Instance inst = example_instance(id);
    const EnsesSolution trivial = trivial_enses_solution(inst);
    CHECK(check_enses_solution(inst, trivial).ok());
    CHECK(trivial.objective_value ==
          doctest::Approx(uninformative_baseline(inst)));
    const EnsesResult solved = solve_enses(inst);
    REQUIRE(solved.report.status == SolveStatus::optimal);
    CHECK(solved.value >= trivial.objective_value - 1e-7);
  }
}

TEST_CASE("solved four-stage solutions satisfy their invariants") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = random_instance(seed, 3, 3, 3);
    const EnsesResult solved = solve_enses(inst);
    REQUIRE(solved.report.status == SolveStatus::optimal);
    CHECK(check_enses_solution(inst, solved.solution).ok());
  }
}

TEST_CASE("imitation sweep on ex1 routes everyone to the trade type") {
  const Instance inst = example_instance("ex1");
  const EsBruteforceResult result = es_bruteforce(inst);
  CHECK(result.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.best.sigma == std::vector<int>{1, 1});
}

TEST_CASE("imitation sweep matches the ex2 ceiling") {
  const EsBruteforceResult result = es_bruteforce(example_instance("ex2"));
  CHECK(result.value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("the complete-graph gadget is worth one third") {
  const EsBruteforceResult result = es_bruteforce(reduce_mis(make_complete(3)));
  CHECK(result.value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("two-state cone reduction agrees with the direct formulation") {
  for (const Graph& g : {make_complete(3), make_edgeless(3), make_path(3)}) {
    const Instance inst = reduce_mis(g);
    EsBruteforceOptions direct;
    direct.force_general = true;
    const EsBruteforceResult fast = es_bruteforce(inst);
    const EsBruteforceResult slow = es_bruteforce(inst, direct);
    CHECK(fast.value == doctest::Approx(slow.value).epsilon(1e-7));
    CHECK(fast.best.sigma == slow.best.sigma);
  }
  const Instance ex1 = example_instance("ex1");
  EsBruteforceOptions direct;
  direct.force_general = true;
  CHECK(es_bruteforce(ex1).value ==
        doctest::Approx(es_bruteforce(ex1, direct).value).epsilon(1e-7));
}

TEST_CASE("parallel and serial imitation sweeps agree") {
  const Instance inst = reduce_mis(make_path(4));
  EsBruteforceOptions serial;
  serial.parallel = false;
  const EsBruteforceResult a = es_bruteforce(inst);
  const EsBruteforceResult b = es_bruteforce(inst, serial);
  CHECK(a.value == b.value);
  CHECK(a.best.sigma == b.best.sigma);
}

TEST_CASE("identity imitation reproduces the IC optimum") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    const Instance inst = random_instance(seed, 2, 2, 3);
    const TwoStageSolution ic = solve_credible_ic(inst);
    REQUIRE(ic.report.status == SolveStatus::optimal);
    const EsBruteforceResult es = es_bruteforce(inst);
    CHECK(es.value >= ic.value - 1e-6);
  }
  // With every mapping forced to the identity the values coincide.
  const Instance inst = example_instance("ex2");
  const TwoStageSolution ic = solve_credible_ic(inst);
  const EsBruteforceResult es = es_bruteforce(inst);
  CHECK(es.value >= ic.value - 1e-6);
}

TEST_CASE("dominance chain on bundled and random instances") {
  std::vector<Instance> suite;
  for (const auto& id : {"ex1", "ex2", "ex4"}) {
    suite.push_back(example_instance(id));
  }
  for (std::uint64_t seed = 41; seed <= 44; ++seed) {
    suite.push_back(random_instance(seed, 3, 3, 3));
  }
  for (const Instance& inst : suite) {
    const EnsesResult enses = solve_enses(inst);
    const TwoStageSolution ic = solve_credible_ic(inst);
    const EsBruteforceResult es = es_bruteforce(inst);
    REQUIRE(enses.report.status == SolveStatus::optimal);
    REQUIRE(ic.report.status == SolveStatus::optimal);
    CHECK(enses.value >= es.value - 1e-6);
    CHECK(es.value >= ic.value - 1e-6);
    const double baseline = uninformative_baseline(inst);
    CHECK(enses.value >= baseline - 1e-6);
    CHECK(solve_noncredible(inst).value >= baseline - 1e-6);
  }
}

TEST_CASE("deviation enumeration agrees with the linearized certificate") {
  int sampled = 0;
  for (std::uint64_t seed = 61; seed <= 80; ++seed) {
    const Instance inst = random_instance(seed, 2, 2, 1 + seed % 4);
    const auto policies = random_feasible_policies(inst, seed * 3 + 1);
    CHECK(deviation_constraints_hold(inst, policies, 1e-9) ==
          linearized_constraints_hold(inst, policies, 1e-9));
    ++sampled;
    // Optimal credible-IC policies satisfy the weaker families but not
    // necessarily the joint remapping one; both certificates must agree
    // regardless.
    const TwoStageSolution ic = solve_credible_ic(inst);
    if (ic.report.status == SolveStatus::optimal) {
      CHECK(deviation_constraints_hold(inst, ic.policies, 1e-6) ==
            linearized_constraints_hold(inst, ic.policies, 1e-6));
    }
    // Solutions of the non-credible LP satisfy both by construction.
    const TwoStageSolution nc = solve_noncredible(inst);
    if (nc.report.status == SolveStatus::optimal) {
      CHECK(deviation_constraints_hold(inst, nc.policies, 1e-6));
      CHECK(linearized_constraints_hold(inst, nc.policies, 1e-6));
    }
  }
  CHECK(sampled == 20);
}

TEST_CASE("imitation sweep cap throws") {
  const Instance inst = reduce_mis(make_complete(3));
  EsBruteforceOptions opts;
  opts.cap = 10;
  CHECK_THROWS_AS(es_bruteforce(inst, opts), ExplosionCap);
}
