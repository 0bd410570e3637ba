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

#ifndef PERSUASION_JSON_IO_HPP
#define PERSUASION_JSON_IO_HPP

#include <nlohmann/json.hpp>

#include "persuasion/agent.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/mechanism.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

using json = nlohmann::json;

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

// Mechanism JSON carries labels, so both directions are instance-bound.
// Accepts either a bare root node or {"name": ..., "root": node}.
json mechanism_to_json(const MechanismTree& mech, const Instance& inst);
MechanismTree mechanism_from_json(const json& j, const Instance& inst);

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);

json profile_to_json(const ResponseProfile& profile, const Instance& inst);
json evaluation_to_json(const EvaluationReport& report, const Instance& inst);

json policies_to_json(const std::vector<Policy>& policies,
                      const Instance& inst);
std::vector<Policy> policies_from_json(const json& j, const Instance& inst);

json enses_solution_to_json(const EnsesSolution& sol);
EnsesSolution enses_solution_from_json(const json& j);

}  // namespace persuasion

#endif  // PERSUASION_JSON_IO_HPP
