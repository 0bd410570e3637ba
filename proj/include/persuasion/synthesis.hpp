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

#ifndef PERSUASION_SYNTHESIS_HPP
#define PERSUASION_SYNTHESIS_HPP

#include <vector>

#include "persuasion/instances.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/mechanism.hpp"

namespace persuasion {

struct SynthesisOptions {
  enum class ZeroBranch { prune, keep };
  ZeroBranch zero_branch = ZeroBranch::prune;
  double tolerance = 1e-7;
};

// Executable five-level tree from a four-stage LP solution: menu root, type
// recommendation signals, direct elicitation, action recommendation signals,
// recommended leaves. Conditional kernels are recovered by dividing the joint
// masses by the recommendation probabilities; throws DivisionDegeneracy when
// mass sits where the recommendation has none.
MechanismTree enses_tree(const Instance& inst, const EnsesSolution& sol,
                         SynthesisOptions opts = {});

// Direct elicitation root with one action-recommendation signaling child per
// type. Throws InfeasiblePolicies when the policies fail the IC two-stage
// constraints.
MechanismTree ic_two_stage_tree(const Instance& inst,
                                const std::vector<Policy>& policies,
                                double tol = kLpFeasTol);

// The independent-set policy over the reduction instance: reporting a vertex
// type reveals nothing; reporting the special type draws a uniformly random
// chosen vertex and recommends its state-matched action. Throws
// NotIndependent when the set has an internal edge.
MechanismTree mis_policy_tree(const Graph& graph,
                              const std::vector<int>& independent_set);

}  // namespace persuasion

#endif  // PERSUASION_SYNTHESIS_HPP
