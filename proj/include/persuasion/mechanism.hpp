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

#ifndef PERSUASION_MECHANISM_HPP
#define PERSUASION_MECHANISM_HPP

#include <optional>
#include <string>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion {

// Node taxonomy of an indefinite-stage mechanism tree:
//   signal  -- principal draws a signal, one child per signal
//   elicit  -- binding elicitation over pairwise-disjoint type subsets that
//              partition the node's candidate set; direct elicitation is the
//              singleton special case
//   menu    -- non-binding (cheap talk) choice among children
//   leaf    -- terminal; the agent acts under the credibility constraint.
//              An optional recommended action pins the play when the imitated
//              type is indifferent.
enum class NodeKind { signal, elicit, menu, leaf };

struct MechanismNode {
  NodeKind kind = NodeKind::leaf;
  SignalStrategy strategy;                // signal nodes
  std::vector<std::vector<int>> options;  // elicit nodes (type indices)
  std::optional<int> recommend;           // leaf nodes (action index)
  std::vector<MechanismNode> children;
  // Candidate set T_x, filled by annotate(); empty until then.
  std::vector<int> candidates;

  static MechanismNode leaf(std::optional<int> rec = std::nullopt);
  static MechanismNode signal(SignalStrategy strat,
                              std::vector<MechanismNode> children);
  static MechanismNode elicit(std::vector<std::vector<int>> options,
                              std::vector<MechanismNode> children);
  static MechanismNode menu(std::vector<MechanismNode> children);
};

struct MechanismTree {
  std::string name;
  MechanismNode root;
};

// Structural validation against an instance's state/type/action sets. The
// report lists every violation with its node path ("0/2/1" are child indices
// from the root).
ValidationReport validate_mechanism(const Instance& inst,
                                    const MechanismTree& mech,
                                    double prob_tol = kProbTol);

// Edges on the longest root-to-leaf path.
int depth(const MechanismTree& mech);

// Fills the candidate set T_x of every node: the types not excluded by
// binding answers on the root path. Idempotent.
MechanismTree annotate(MechanismTree mech, int num_types);

// Graphviz export with stable node ordering; node shape encodes the variant,
// edges carry signal/option labels.
std::string to_dot(const MechanismTree& mech, const Instance& inst);

std::string path_join(const std::string& parent, int child);

}  // namespace persuasion

#endif  // PERSUASION_MECHANISM_HPP
