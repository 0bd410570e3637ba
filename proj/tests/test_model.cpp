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
#include "persuasion/model.hpp"

using namespace persuasion;

TEST_CASE("well-formed bundled instances validate") {
  for (const auto& id : example_instance_ids()) {
    CHECK(validate_instance(example_instance(id)).ok());
  }
}

TEST_CASE("validation flags a prior that does not sum to one") {
  Instance inst = example_instance("ex1");
  inst.prior = {0.6, 0.6};
  const auto report = validate_instance(inst);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("sums to") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validation flags negative probabilities") {
  Instance inst = example_instance("ex1");
  inst.prior = {1.1, -0.1};
  const auto report = validate_instance(inst);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("negative") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("validation flags non-finite payoffs") {
  Instance inst = example_instance("ex1");
  inst.agent_payoff[0][1][2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(validate_instance(inst).ok());
}

TEST_CASE("posterior after a partially revealing signal") {
  // ex3's first-branch strategy mixes gamma into the alpha signal.
  const double m = 10001.0;
  const double delta = 10.0 / m;
  SignalStrategy strat;
  strat.signals = {"g_alpha_gamma", "g_beta_gamma"};
  strat.probs = {{1, 0}, {0, 1}, {1 - delta, delta}};
  const Belief prior = uniform_belief(3);

  const Belief post_a = bayes_update(prior, strat, 0);
  CHECK(post_a[0] == doctest::Approx(1.0 / (2 - delta)).epsilon(1e-12));
  CHECK(post_a[1] == doctest::Approx(0.0));
  CHECK(post_a[2] ==
        doctest::Approx((1 - delta) / (2 - delta)).epsilon(1e-12));

  const Belief post_b = bayes_update(prior, strat, 1);
  CHECK(post_b[0] == doctest::Approx(0.0));
  CHECK(post_b[1] == doctest::Approx(1.0 / (1 + delta)).epsilon(1e-12));
  CHECK(post_b[2] == doctest::Approx(delta / (1 + delta)).epsilon(1e-12));
}

TEST_CASE("fully revealing strategy yields a point mass") {
  SignalStrategy strat;
  strat.signals = {"g1", "g2", "g3"};
  strat.probs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const Belief post = bayes_update(uniform_belief(3), strat, 0);
  CHECK(post[0] == doctest::Approx(1.0));
  CHECK(post[1] == doctest::Approx(0.0));
  CHECK(post[2] == doctest::Approx(0.0));
}

TEST_CASE("constant strategy leaves the prior unchanged") {
  SignalStrategy strat;
  strat.signals = {"g"};
  strat.probs = {{1}, {1}, {1}};
  Belief prior{{0.2, 0.5, 0.3}};
  const Belief post = bayes_update(prior, strat, 0);
  for (int s = 0; s < 3; ++s) {
    CHECK(post[s] == doctest::Approx(prior[s]).epsilon(1e-12));
  }
}

TEST_CASE("zero-marginal signals are rejected") {
  SignalStrategy strat;
  strat.signals = {"g1", "g2"};
  strat.probs = {{1, 0}, {1, 0}};
  CHECK_THROWS_AS(bayes_update(uniform_belief(2), strat, 1),
                  ZeroProbabilitySignal);
}

TEST_CASE("posterior mixture reconstitutes the prior") {
  const double m = 10001.0;
  SignalStrategy strat;
  strat.signals = {"x", "y"};
  strat.probs = {{1, 0}, {0, 1}, {1 - 10 / m, 10 / m}};
  Belief prior{{0.5, 0.25, 0.25}};
  std::vector<double> mix(3, 0.0);
  for (int g = 0; g < 2; ++g) {
    const double marginal = signal_marginal(prior, strat, g);
    const Belief post = bayes_update(prior, strat, g);
    for (int s = 0; s < 3; ++s) mix[s] += marginal * post[s];
  }
  for (int s = 0; s < 3; ++s) {
    CHECK(mix[s] == doctest::Approx(prior[s]).epsilon(1e-9));
  }
}

TEST_CASE("ex1 type t2 is indifferent between both trade actions") {
  const Instance inst = example_instance("ex1");
  const auto best = argmax_actions(inst, uniform_belief(2), 1);
  CHECK(best == std::vector<int>{2, 3});  // c, d
}

TEST_CASE("ex3 type t1 strictly prefers a-prime at the mixed posterior") {
  const Instance inst = example_instance("ex3");
  const double delta = 10.0 / 10001.0;
  Belief post{{1 / (2 - delta), 0.0, (1 - delta) / (2 - delta)}};
  const auto best = argmax_actions(inst, post, 0);
  REQUIRE(best.size() == 1);
  CHECK(inst.actions[best[0]] == "a'");
}

TEST_CASE("point-mass beliefs reduce to a row argmax") {
  const Instance inst = random_instance(7, 3, 2, 4);
  for (int s = 0; s < inst.num_states(); ++s) {
    for (int t = 0; t < inst.num_types(); ++t) {
      const auto best = argmax_actions(inst, point_mass(s, 3), t);
      double top = inst.u(t, s, 0);
      for (int a = 1; a < 4; ++a) top = std::max(top, inst.u(t, s, a));
      for (int a : best) CHECK(inst.u(t, s, a) == doctest::Approx(top));
      CHECK(!best.empty());
    }
  }
}

TEST_CASE("argmax is invariant under positive affine payoff maps") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = random_instance(seed, 3, 3, 3);
    Belief belief{inst.prior};
    std::vector<std::vector<int>> before(3);
    for (int t = 0; t < 3; ++t) before[t] = argmax_actions(inst, belief, t);
    std::mt19937_64 rng(seed * 31 + 1);
    const double scale = 0.5 + (rng() % 1000) / 500.0;
    const double offset = static_cast<double>(rng() % 7) - 3.0;
    for (auto& per_state : inst.agent_payoff) {
      for (auto& row : per_state) {
        for (double& u : row) u = scale * u + offset;
      }
    }
    for (int t = 0; t < 3; ++t) {
      CHECK(argmax_actions(inst, belief, t) == before[t]);
    }
  }
}
