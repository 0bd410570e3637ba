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

#include <sstream>

#include "persuasion/agent.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/json_io.hpp"
#include "persuasion/lp.hpp"

using namespace persuasion;

TEST_CASE("ex1 transcription") {
  const Instance inst = example_instance("ex1");
  CHECK(inst.num_states() == 2);
  CHECK(inst.num_types() == 2);
  CHECK(inst.num_actions() == 4);
  CHECK(inst.u(0, 0, 0) == 4);   // t1 at theta1 playing a
  CHECK(inst.u(1, 1, 3) == 1);   // t2 at theta2 playing d
  CHECK(inst.v(0, 2) == 1);
  CHECK(inst.v(1, 3) == 1);
  CHECK(inst.v(0, 0) == 0);
}

TEST_CASE("ex4 transcription") {
  const Instance inst = example_instance("ex4");
  CHECK(inst.type_dist == std::vector<double>{1.0, 0.0, 0.0});
  CHECK(inst.u(0, 0, 0) == 1);    // t0 at alpha playing a
  CHECK(inst.u(0, 1, 3) == 0);    // t0 at beta playing b'
  CHECK(inst.u(1, 0, 0) == -1);   // blank entries
  CHECK(inst.u(2, 1, 0) == -1);
  CHECK(inst.v(0, 1) == 1);
  CHECK(inst.v(1, 3) == 1);
  CHECK(inst.v(0, 3) == 0);
}

TEST_CASE("ex5 transcription at n = 3") {
  ExampleParams params;
  params.n = 3;
  const Instance inst = example_instance("ex5", params);
  const double m = 1e6;
  CHECK(inst.num_states() == 3);
  CHECK(inst.num_types() == 4);
  CHECK(inst.num_actions() == 6);
  CHECK(inst.u(0, 2, 5) == 1);          // t0 at theta_n playing a_n'
  CHECK(inst.u(0, 0, 3) == 0);          // t0 on the primed diagonal
  CHECK(inst.u(0, 0, 4) == -m);         // primed off-diagonal
  CHECK(inst.u(1, 0, 3) == 1.0 / m);    // highlighted entry of t1
  CHECK(inst.u(1, 0, 0) == 0);          // zeroed diagonal of t1
  CHECK(inst.u(1, 1, 1) == 1);          // untouched below the zeroed range
  CHECK(inst.u(2, 1, 1) == 0);          // zeroed diagonal of t2 extends
  CHECK(inst.u(3, 2, 5) == 1.0 / m);    // last type's highlighted entry
}

TEST_CASE("ex3 penalty entries depend on the big-M parameter") {
  ExampleParams params;
  params.big_m = 20000;
  const Instance inst = example_instance("ex3", params);
  CHECK(inst.u(0, 0, 0) == -20000);
  CHECK(inst.u(0, 0, 1) == 1);
  CHECK_THROWS_AS(example_instance("ex3", ExampleParams{.big_m = 5000}),
                  BadParams);
}

TEST_CASE("every bundled mechanism evaluates to its recorded value") {
  CHECK(evaluate(example_instance("ex1"), example_mechanism("ex1_trade"))
            .principal_value == doctest::Approx(1.0));
  CHECK(evaluate(example_instance("ex2"), example_mechanism("ex2_ses"))
            .principal_value == doctest::Approx(5.0 / 6.0));
  const double delta = 10.0 / 10001.0;
  CHECK(evaluate(example_instance("ex3"), example_mechanism("ex3_fig2"))
            .principal_value == doctest::Approx(1 - delta / 3).epsilon(1e-12));
  CHECK(evaluate(example_instance("ex4"), example_mechanism("ex4_pie"))
            .principal_value == doctest::Approx(1.0));
  for (int n = 3; n <= 5; ++n) {
    ExampleParams params;
    params.n = n;
    CHECK(evaluate(example_instance("ex5", params),
                   example_mechanism("ex5_pie", params))
              .principal_value == doctest::Approx(1.0));
    CHECK(depth(example_mechanism("ex5_pie", params)) == 2 * n);
  }
}

TEST_CASE("reduction payoffs follow the gadget table") {
  const Graph k3 = make_complete(3);
  const Instance inst = reduce_mis(k3);
  CHECK(inst.num_types() == 4);
  CHECK(inst.num_actions() == 8);
  CHECK(inst.type_dist[3] == 0.0);
  const int a_v2 = 1;  // neighbor of v1 in the complete graph
  CHECK(inst.u(0, 0, a_v2) == -3);
  CHECK(inst.u(0, 0, 0) == 1);                      // own action
  CHECK(inst.u(0, 0, 6) == doctest::Approx(4.0 / 3.0));  // a0 at theta1
  CHECK(inst.u(3, 0, 0) == 1);                      // special type
  CHECK(inst.u(3, 0, 6) == -1);
  CHECK(inst.v(0, 6) == 0);
  CHECK(inst.v(0, 0) == 1);
  CHECK(validate_instance(inst).ok());

  const Instance pair = reduce_mis(make_edgeless(2));
  CHECK(pair.u(0, 0, 1) == 0);  // non-adjacent column
}

TEST_CASE("single-vertex reduction is fully persuadable") {
  const Instance inst = reduce_mis(make_edgeless(1));
  CHECK(inst.num_types() == 2);
  const EsBruteforceResult result = es_bruteforce(inst);
  CHECK(result.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("maximum independent sets of the pinned graphs") {
  CHECK(max_independent_set(make_complete(3)).size == 1);
  CHECK(max_independent_set(make_cycle(5)).size == 2);
  CHECK(max_independent_set(make_edgeless(4)).size == 4);
  CHECK(max_independent_set(make_path(4)).size == 2);
  CHECK(max_independent_set(make_star(4)).size == 4);
  const MisResult c5 = max_independent_set(make_cycle(5));
  for (size_t i = 0; i < c5.witness.size(); ++i) {
    for (size_t j = i + 1; j < c5.witness.size(); ++j) {
      CHECK_FALSE(make_cycle(5).has_edge(c5.witness[i], c5.witness[j]));
    }
  }
}

TEST_CASE("independent set search is capped") {
  CHECK_THROWS_AS(max_independent_set(make_edgeless(21)), SizeCap);
}

TEST_CASE("random instances are deterministic and valid") {
  const Instance a = random_instance(1, 2, 2, 2);
  const Instance b = random_instance(1, 2, 2, 2);
  CHECK(a.agent_payoff == b.agent_payoff);
  CHECK(a.prior == b.prior);
  CHECK(validate_instance(a).ok());
  CHECK(validate_instance(random_instance(2, 3, 3, 3, {0.0, 1.0})).ok());

  const Instance c = random_instance(2, 2, 2, 2);
  CHECK(a.agent_payoff != c.agent_payoff);
}

TEST_CASE("graph round trip through JSON") {
  const Graph g = make_cycle(5);
  const Graph back = graph_from_json(graph_to_json(g));
  CHECK(back.n == 5);
  CHECK(back.edges == g.edges);
  CHECK_THROWS_AS(graph_from_json(json::parse(R"({"n":2,"edges":[[0,5]]})")),
                  BadParams);
}

TEST_CASE("DIMACS reader accepts the edge format") {
  std::istringstream in(
      "c toy graph\n"
      "p edge 3 2\n"
      "e 1 2\n"
      "e 2 3\n");
  const Graph g = graph_from_dimacs(in);
  CHECK(g.n == 3);
  REQUIRE(g.edges.size() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("instance JSON round trip") {
  const Instance inst = example_instance("ex3");
  const Instance back = instance_from_json(instance_to_json(inst));
  CHECK(back.states == inst.states);
  CHECK(back.agent_payoff == inst.agent_payoff);
  CHECK(back.prior == inst.prior);
}

TEST_CASE("mechanism JSON round trip preserves evaluation") {
  const Instance inst = example_instance("ex3");
  const MechanismTree mech = example_mechanism("ex3_fig2");
  const MechanismTree back =
      mechanism_from_json(mechanism_to_json(mech, inst), inst);
  CHECK(evaluate(inst, back).principal_value ==
        doctest::Approx(evaluate(inst, mech).principal_value));
}
