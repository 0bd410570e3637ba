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

#ifndef PERSUASION_AGENT_HPP
#define PERSUASION_AGENT_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "persuasion/mechanism.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

// What a credible agent does at a leaf: imitate `imitated_type` (a member of
// the leaf's candidate set) and play `action`, which is optimal for that type
// under the leaf posterior.
struct LeafChoice {
  int imitated_type = 0;
  int action = 0;
};

// One type's deterministic plan at every reachable decision point.
//
// Tie-breaking convention, applied uniformly ("the mechanism decides"):
//  * Within the imitated type's optimal action set, the mechanism pins the
//    played action: the leaf's recommended action when it is in the set,
//    otherwise the one with the highest principal expected payoff, then the
//    lowest action index.
//  * Across agent-indifferent alternatives (imitated types, elicitation
//    answers, menu picks) the principal-preferred one is chosen, then the
//    lowest index.
struct ResponseProfile {
  int true_type = 0;
  double agent_value = 0.0;
  std::map<std::string, int> choices;            // elicit/menu path -> branch
  std::map<std::string, LeafChoice> leaf_choices;
  std::map<std::string, Belief> beliefs;         // path -> posterior
};

struct TypeOutcome {
  ResponseProfile profile;
  double agent_value = 0.0;
  double principal_value = 0.0;  // conditional on this type
};

struct EvaluationReport {
  double principal_value = 0.0;
  std::vector<TypeOutcome> per_type;
  // Realized posterior support per reachable path (union over types).
  std::map<std::string, std::vector<int>> posterior_support;
};

struct MultistageIcReport {
  std::vector<bool> ic_at_menu;                          // per type
  std::map<std::pair<int, int>, bool> dic_at_si;         // (i, j)
  std::map<std::tuple<int, int, int>, bool> dic_at_sijk; // (i, j, k)
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Exact best response by backward induction over the annotated tree.
// Throws InvalidMechanism when validation fails.
ResponseProfile best_response(const Instance& inst, const MechanismTree& mech,
                              int type, double tie_tol = kTieTol);

// Principal's expected payoff under every type's best response, exact over
// the tree (no sampling).
EvaluationReport evaluate(const Instance& inst, const MechanismTree& mech,
                          double tie_tol = kTieTol, bool parallel = true);

// Independent oracle: exhaustively enumerates every pure profile (branch
// choice at each reachable elicitation/menu node, imitated type at each
// reachable leaf) and returns the maximum expected utility for `type`.
// Throws ExplosionCap when the profile count exceeds `cap`.
double brute_force_response(const Instance& inst, const MechanismTree& mech,
                            int type, long long cap = 10000000,
                            double tie_tol = kTieTol, bool parallel = false);

// Verifies the three incentive layers of a five-level tree (menu root, type
// recommendation signals, direct elicitation, action recommendation signals,
// recommended leaves). Throws ShapeMismatch when the tree is not of that
// shape.
MultistageIcReport check_multistage_ic(const Instance& inst,
                                       const MechanismTree& mech,
                                       double tol = kIcTol);

// Agent value of a subtree for `type`, starting from the given posterior and
// candidate set. Exposed for incentive checks.
double subtree_agent_value(const Instance& inst, const MechanismNode& node,
                           const Belief& belief,
                           const std::vector<int>& candidates, int type,
                           double tie_tol = kTieTol);

// The action the mechanism pins at a leaf when the agent imitates `type`:
// the recommended action if optimal for that type, else principal-best among
// the type's optimal actions, then lowest index.
int pinned_leaf_action(const Instance& inst, const MechanismNode& leaf,
                       const Belief& belief, int imitated_type,
                       double tie_tol = kTieTol);

}  // namespace persuasion

#endif  // PERSUASION_AGENT_HPP
