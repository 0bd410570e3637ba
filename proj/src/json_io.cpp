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

#include "persuasion/json_io.hpp"

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

std::vector<std::string> string_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw BadParams(std::string("missing array field '") + key + "'");
  }
  return j[key].get<std::vector<std::string>>();
}

int resolve(const Instance& inst, const std::string& label,
            std::optional<int> (Instance::*lookup)(const std::string&) const,
            const char* what) {
  const auto idx = (inst.*lookup)(label);
  if (!idx) {
    throw BadParams(std::string("unknown ") + what + " label '" + label + "'");
  }
  return *idx;
}

json node_to_json(const MechanismNode& node, const Instance& inst) {
  json j;
  switch (node.kind) {
    case NodeKind::leaf:
      j["kind"] = "leaf";
      if (node.recommend) j["recommend"] = inst.actions[*node.recommend];
      return j;
    case NodeKind::menu: {
      j["kind"] = "menu";
      json children = json::array();
      for (const auto& c : node.children) {
        children.push_back(node_to_json(c, inst));
      }
      j["children"] = std::move(children);
      return j;
    }
    case NodeKind::signal: {
      j["kind"] = "signal";
      j["signals"] = node.strategy.signals;
      j["probs"] = node.strategy.probs;
      json children = json::array();
      for (const auto& c : node.children) {
        children.push_back(node_to_json(c, inst));
      }
      j["children"] = std::move(children);
      return j;
    }
    case NodeKind::elicit: {
      j["kind"] = "elicit";
      json options = json::array();
      for (const auto& opt : node.options) {
        json labels = json::array();
        for (int t : opt) labels.push_back(inst.types[t]);
        options.push_back(std::move(labels));
      }
      j["options"] = std::move(options);
      json children = json::array();
      for (const auto& c : node.children) {
        children.push_back(node_to_json(c, inst));
      }
      j["children"] = std::move(children);
      return j;
    }
  }
  return j;
}

MechanismNode node_from_json(const json& j, const Instance& inst) {
  if (!j.is_object() || !j.contains("kind")) {
    throw BadParams("mechanism node must be an object with a 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  std::vector<MechanismNode> children;
  if (j.contains("children")) {
    for (const auto& c : j["children"]) {
      children.push_back(node_from_json(c, inst));
    }
  }
  if (kind == "leaf") {
    std::optional<int> rec;
    if (j.contains("recommend")) {
      rec = resolve(inst, j["recommend"].get<std::string>(),
                    &Instance::action_index, "action");
    }
    return MechanismNode::leaf(rec);
  }
  if (kind == "menu") return MechanismNode::menu(std::move(children));
  if (kind == "signal") {
    SignalStrategy strat;
    strat.signals = string_list(j, "signals");
    if (!j.contains("probs")) throw BadParams("signal node without probs");
    strat.probs = j["probs"].get<std::vector<std::vector<double>>>();
    return MechanismNode::signal(std::move(strat), std::move(children));
  }
  if (kind == "elicit") {
    if (!j.contains("options")) throw BadParams("elicit node without options");
    std::vector<std::vector<int>> options;
    for (const auto& opt : j["options"]) {
      std::vector<int> types;
      for (const auto& label : opt) {
        types.push_back(resolve(inst, label.get<std::string>(),
                                &Instance::type_index, "type"));
      }
      options.push_back(std::move(types));
    }
    return MechanismNode::elicit(std::move(options), std::move(children));
  }
  throw BadParams("unknown node kind '" + kind + "'");
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json j;
  j["states"] = inst.states;
  j["types"] = inst.types;
  j["actions"] = inst.actions;
  j["prior"] = inst.prior;
  j["type_dist"] = inst.type_dist;
  j["agent_payoff"] = inst.agent_payoff;
  j["principal_payoff"] = inst.principal_payoff;
  return j;
}

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.states = string_list(j, "states");
  inst.types = string_list(j, "types");
  inst.actions = string_list(j, "actions");
  if (!j.contains("prior") || !j.contains("type_dist") ||
      !j.contains("agent_payoff") || !j.contains("principal_payoff")) {
    throw BadParams("instance JSON missing a required field");
  }
  inst.prior = j["prior"].get<std::vector<double>>();
  inst.type_dist = j["type_dist"].get<std::vector<double>>();
  inst.agent_payoff =
      j["agent_payoff"].get<std::vector<std::vector<std::vector<double>>>>();
  inst.principal_payoff =
      j["principal_payoff"].get<std::vector<std::vector<double>>>();
  return inst;
}

json mechanism_to_json(const MechanismTree& mech, const Instance& inst) {
  json j;
  j["name"] = mech.name;
  j["root"] = node_to_json(mech.root, inst);
  return j;
}

MechanismTree mechanism_from_json(const json& j, const Instance& inst) {
  MechanismTree tree;
  if (j.is_object() && j.contains("root")) {
    tree.name = j.value("name", "");
    tree.root = node_from_json(j["root"], inst);
  } else {
    tree.root = node_from_json(j, inst);
  }
  return tree;
}

json graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.n;
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
  j["edges"] = std::move(edges);
  return j;
}

Graph graph_from_json(const json& j) {
  Graph g;
  if (!j.contains("n")) throw BadParams("graph JSON missing 'n'");
  g.n = j["n"].get<int>();
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      const int u = e.at(0).get<int>();
      const int v = e.at(1).get<int>();
      if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v) {
        throw BadParams("graph edge out of range");
      }
      g.edges.push_back({u, v});
    }
  }
  return g;
}

json profile_to_json(const ResponseProfile& profile, const Instance& inst) {
  json j;
  j["true_type"] = inst.types[profile.true_type];
  j["agent_value"] = profile.agent_value;
  json choices = json::object();
  for (const auto& [path, pick] : profile.choices) {
    choices[path.empty() ? "." : path] = pick;
  }
  j["choices"] = std::move(choices);
  json leaves = json::object();
  for (const auto& [path, choice] : profile.leaf_choices) {
    leaves[path.empty() ? "." : path] =
        json{{"imitated_type", inst.types[choice.imitated_type]},
             {"action", inst.actions[choice.action]}};
  }
  j["leaf_choices"] = std::move(leaves);
  json beliefs = json::object();
  for (const auto& [path, belief] : profile.beliefs) {
    beliefs[path.empty() ? "." : path] = belief.probs;
  }
  j["beliefs"] = std::move(beliefs);
  return j;
}

json evaluation_to_json(const EvaluationReport& report, const Instance& inst) {
  json j;
  j["principal_value"] = report.principal_value;
  json per_type = json::object();
  json profiles = json::object();
  for (int t = 0; t < static_cast<int>(report.per_type.size()); ++t) {
    const auto& outcome = report.per_type[t];
    per_type[inst.types[t]] =
        json{{"agent_value", outcome.agent_value},
             {"principal_value", outcome.principal_value}};
    profiles[inst.types[t]] = profile_to_json(outcome.profile, inst);
  }
  j["per_type"] = std::move(per_type);
  j["profiles"] = std::move(profiles);
  json support = json::object();
  for (const auto& [path, states] : report.posterior_support) {
    json labels = json::array();
    for (int s : states) labels.push_back(inst.states[s]);
    support[path.empty() ? "." : path] = std::move(labels);
  }
  j["posterior_support"] = std::move(support);
  return j;
}

json policies_to_json(const std::vector<Policy>& policies,
                      const Instance& inst) {
  json j = json::object();
  for (int t = 0; t < static_cast<int>(policies.size()); ++t) {
    j[inst.types[t]] = policies[t];
  }
  return j;
}

std::vector<Policy> policies_from_json(const json& j, const Instance& inst) {
  std::vector<Policy> policies(inst.num_types());
  for (int t = 0; t < inst.num_types(); ++t) {
    if (!j.contains(inst.types[t])) {
      throw BadParams("policies JSON missing type '" + inst.types[t] + "'");
    }
    policies[t] = j[inst.types[t]].get<Policy>();
  }
  return policies;
}

json enses_solution_to_json(const EnsesSolution& sol) {
  json j;
  j["pi"] = sol.pi;
  j["phi"] = sol.phi;
  j["node_values"] = sol.node_values;
  j["aux_upper"] = sol.aux_upper;
  j["objective_value"] = sol.objective_value;
  return j;
}

EnsesSolution enses_solution_from_json(const json& j) {
  EnsesSolution sol;
  if (!j.contains("pi") || !j.contains("phi")) {
    throw BadParams("solution JSON missing pi/phi");
  }
  sol.pi = j["pi"]
               .get<std::vector<std::vector<std::vector<double>>>>();
  sol.phi = j["phi"].get<std::vector<
      std::vector<std::vector<std::vector<std::vector<double>>>>>>();
  sol.node_values =
      j["node_values"]
          .get<std::vector<std::vector<std::vector<std::vector<double>>>>>();
  sol.aux_upper =
      j["aux_upper"].get<std::vector<std::vector<std::vector<double>>>>();
  sol.objective_value = j.value("objective_value", 0.0);
  return sol;
}

}  // namespace persuasion
