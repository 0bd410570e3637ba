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

#include <set>

#include "persuasion/instances.hpp"
#include "persuasion/mechanism.hpp"

using namespace persuasion;

namespace {

int count_nodes(const MechanismNode& node) {
  int n = 1;
  for (const auto& c : node.children) n += count_nodes(c);
  return n;
}

void collect_candidate_sizes(const MechanismNode& node,
                             std::vector<int>& sizes) {
  sizes.push_back(static_cast<int>(node.candidates.size()));
  for (const auto& c : node.children) collect_candidate_sizes(c, sizes);
}

}  // namespace

TEST_CASE("bundled mechanisms validate against their instances") {
  CHECK(validate_mechanism(example_instance("ex1"),
                           example_mechanism("ex1_trade"))
            .ok());
  CHECK(validate_mechanism(example_instance("ex2"),
                           example_mechanism("ex2_ses"))
            .ok());
  CHECK(validate_mechanism(example_instance("ex3"),
                           example_mechanism("ex3_fig2"))
            .ok());
  CHECK(validate_mechanism(example_instance("ex4"),
                           example_mechanism("ex4_pie"))
            .ok());
  ExampleParams params;
  params.n = 5;
  CHECK(validate_mechanism(example_instance("ex5", params),
                           example_mechanism("ex5_pie", params))
            .ok());
}

TEST_CASE("overlapping elicitation options are rejected") {
  const Instance inst = example_instance("ex1");
  MechanismTree tree;
  tree.root = MechanismNode::elicit(
      {{0, 1}, {1}}, {MechanismNode::leaf(), MechanismNode::leaf()});
  const auto report = validate_mechanism(inst, tree);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("not disjoint") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("non-partition options are rejected") {
  const Instance inst = example_instance("ex4");
  MechanismTree tree;
  tree.root = MechanismNode::elicit(
      {{0}, {1}}, {MechanismNode::leaf(), MechanismNode::leaf()});
  CHECK_FALSE(validate_mechanism(inst, tree).ok());
}

TEST_CASE("sub-stochastic signal rows are rejected") {
  const Instance inst = example_instance("ex1");
  SignalStrategy strat;
  strat.signals = {"g1", "g2"};
  strat.probs = {{0.5, 0.4}, {0.5, 0.5}};
  MechanismTree tree;
  tree.root = MechanismNode::signal(
      std::move(strat), {MechanismNode::leaf(), MechanismNode::leaf()});
  const auto report = validate_mechanism(inst, tree);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.find("not a distribution") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("depth of a bare leaf is zero") {
  MechanismTree tree;
  tree.root = MechanismNode::leaf();
  CHECK(depth(tree) == 0);
}

TEST_CASE("the n-step chain mechanism has depth 2n") {
  for (int n = 1; n <= 6; ++n) {
    ExampleParams params;
    params.n = n;
    CHECK(depth(example_mechanism("ex5_pie", params)) == 2 * n);
  }
}

TEST_CASE("the ex3 menu mechanism has depth 4 and 15 nodes") {
  const MechanismTree tree = example_mechanism("ex3_fig2");
  CHECK(depth(tree) == 4);
  CHECK(count_nodes(tree.root) == 15);
}

TEST_CASE("candidate sets shrink down the chain mechanism") {
  ExampleParams params;
  params.n = 4;
  const Instance inst = example_instance("ex5", params);
  MechanismTree tree =
      annotate(example_mechanism("ex5_pie", params), inst.num_types());
  // Walking no/continue branches: each binding answer removes one type.
  const MechanismNode* node = &tree.root;
  int expected = inst.num_types();
  while (!node->children.empty()) {
    CHECK(static_cast<int>(node->candidates.size()) == expected);
    if (node->kind == NodeKind::elicit) {
      node = &node->children[1];
      --expected;
    } else {
      node = &node->children[1];
    }
  }
}

TEST_CASE("the yes-leaf of the two-state PIE tree keeps only the asked type") {
  const Instance inst = example_instance("ex4");
  MechanismTree tree =
      annotate(example_mechanism("ex4_pie"), inst.num_types());
  const MechanismNode& yes_leaf = tree.root.children[0];
  CHECK(yes_leaf.candidates == std::vector<int>{0});
}

TEST_CASE("trees without binding elicitation keep the full candidate set") {
  const Instance inst = example_instance("ex2");
  SignalStrategy strat;
  strat.signals = {"g1", "g2"};
  strat.probs = {{1, 0}, {0, 1}, {1, 0}};
  MechanismTree tree;
  tree.root = MechanismNode::signal(
      std::move(strat),
      {MechanismNode::leaf(), MechanismNode::menu({MechanismNode::leaf(),
                                                   MechanismNode::leaf()})});
  tree = annotate(std::move(tree), inst.num_types());
  std::vector<int> sizes;
  collect_candidate_sizes(tree.root, sizes);
  for (int s : sizes) CHECK(s == inst.num_types());
}

TEST_CASE("annotation is idempotent") {
  ExampleParams params;
  params.n = 3;
  const Instance inst = example_instance("ex5", params);
  MechanismTree once =
      annotate(example_mechanism("ex5_pie", params), inst.num_types());
  MechanismTree twice = annotate(once, inst.num_types());
  std::vector<int> a, b;
  collect_candidate_sizes(once.root, a);
  collect_candidate_sizes(twice.root, b);
  CHECK(a == b);
}

TEST_CASE("depth dominates every subtree's depth plus its distance") {
  const MechanismTree tree = example_mechanism("ex3_fig2");
  const int total = depth(tree);
  for (int i = 0; i < static_cast<int>(tree.root.children.size()); ++i) {
    MechanismTree sub;
    sub.root = tree.root.children[i];
    CHECK(total >= depth(sub) + 1);
  }
}

TEST_CASE("dot export is deterministic and shaped") {
  const Instance inst = example_instance("ex3");
  const MechanismTree tree = example_mechanism("ex3_fig2");
  const std::string dot1 = to_dot(tree, inst);
  const std::string dot2 = to_dot(tree, inst);
  CHECK(dot1 == dot2);
  CHECK(dot1.find("digraph") != std::string::npos);
  // One node statement per tree node.
  size_t count = 0;
  for (size_t pos = dot1.find("shape="); pos != std::string::npos;
       pos = dot1.find("shape=", pos + 1)) {
    ++count;
  }
  CHECK(count == 15);

  MechanismTree leaf;
  leaf.root = MechanismNode::leaf();
  const std::string single = to_dot(leaf, inst);
  CHECK(single.find("n [shape=point]") != std::string::npos);
}
