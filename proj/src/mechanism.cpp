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

#include "persuasion/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace persuasion {

MechanismNode MechanismNode::leaf(std::optional<int> rec) {
  MechanismNode n;
  n.kind = NodeKind::leaf;
  n.recommend = rec;
  return n;
}

MechanismNode MechanismNode::signal(SignalStrategy strat,
                                    std::vector<MechanismNode> children) {
  MechanismNode n;
  n.kind = NodeKind::signal;
  n.strategy = std::move(strat);
  n.children = std::move(children);
  return n;
}

MechanismNode MechanismNode::elicit(std::vector<std::vector<int>> options,
                                    std::vector<MechanismNode> children) {
  MechanismNode n;
  n.kind = NodeKind::elicit;
  n.options = std::move(options);
  n.children = std::move(children);
  return n;
}

MechanismNode MechanismNode::menu(std::vector<MechanismNode> children) {
  MechanismNode n;
  n.kind = NodeKind::menu;
  n.children = std::move(children);
  return n;
}

std::string path_join(const std::string& parent, int child) {
  if (parent.empty()) return std::to_string(child);
  return parent + "/" + std::to_string(child);
}

namespace {

std::string at_path(const std::string& path) {
  return path.empty() ? "(root)" : path;
}

void validate_node(const Instance& inst, const MechanismNode& node,
                   const std::string& path, const std::vector<int>& candidates,
                   double tol, std::vector<std::string>& out) {
  switch (node.kind) {
    case NodeKind::leaf: {
      if (!node.children.empty()) {
        out.push_back("leaf has children at " + at_path(path));
      }
      if (node.recommend &&
          (*node.recommend < 0 || *node.recommend >= inst.num_actions())) {
        out.push_back("recommended action out of range at " + at_path(path));
      }
      return;
    }
    case NodeKind::menu: {
      if (node.children.empty()) {
        out.push_back("menu has no children at " + at_path(path));
      }
      for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
        validate_node(inst, node.children[i], path_join(path, i), candidates,
                      tol, out);
      }
      return;
    }
    case NodeKind::signal: {
      const auto& st = node.strategy;
      if (static_cast<int>(node.children.size()) != st.num_signals()) {
        out.push_back("signal child count does not match signal count at " +
                      at_path(path));
      }
      if (static_cast<int>(st.probs.size()) != inst.num_states()) {
        out.push_back("signal probs row count does not match states at " +
                      at_path(path));
      } else {
        for (int s = 0; s < inst.num_states(); ++s) {
          if (static_cast<int>(st.probs[s].size()) != st.num_signals()) {
            out.push_back("signal probs row " + std::to_string(s) +
                          " does not match signal count at " + at_path(path));
            continue;
          }
          double sum = 0.0;
          bool neg = false;
          for (double p : st.probs[s]) {
            if (!std::isfinite(p) || p < -tol) neg = true;
            sum += p;
          }
          if (neg) {
            out.push_back("signal row " + std::to_string(s) +
                          " has a negative entry at " + at_path(path));
          }
          if (std::fabs(sum - 1.0) > tol) {
            std::ostringstream os;
            os << "signal row " << s << " not a distribution (sums to " << sum
               << ") at " << at_path(path);
            out.push_back(os.str());
          }
        }
      }
      std::set<std::string> seen;
      for (const auto& g : st.signals) {
        if (!seen.insert(g).second) {
          out.push_back("duplicate signal label '" + g + "' at " +
                        at_path(path));
        }
      }
      for (int i = 0;
           i < std::min<int>(node.children.size(), st.num_signals()); ++i) {
        validate_node(inst, node.children[i], path_join(path, i), candidates,
                      tol, out);
      }
      return;
    }
    case NodeKind::elicit: {
      if (node.options.empty()) {
        out.push_back("elicitation offers no options at " + at_path(path));
        return;
      }
      if (node.children.size() != node.options.size()) {
        out.push_back("elicitation child count does not match options at " +
                      at_path(path));
      }
      std::set<int> seen;
      bool disjoint = true;
      for (const auto& opt : node.options) {
        if (opt.empty()) {
          out.push_back("empty elicitation option at " + at_path(path));
        }
        for (int t : opt) {
          if (t < 0 || t >= inst.num_types()) {
            out.push_back("option type index out of range at " +
                          at_path(path));
          } else if (!seen.insert(t).second) {
            disjoint = false;
          }
        }
      }
      if (!disjoint) {
        out.push_back("options not disjoint at " + at_path(path));
      }
      std::set<int> cand(candidates.begin(), candidates.end());
      if (seen != cand) {
        out.push_back("options do not partition the candidate set at " +
                      at_path(path));
      }
      const int pairs = static_cast<int>(
          std::min(node.children.size(), node.options.size()));
      for (int i = 0; i < pairs; ++i) {
        std::vector<int> next(node.options[i]);
        std::sort(next.begin(), next.end());
        validate_node(inst, node.children[i], path_join(path, i), next, tol,
                      out);
      }
      return;
    }
  }
}

int node_depth(const MechanismNode& node) {
  int d = 0;
  for (const auto& c : node.children) d = std::max(d, 1 + node_depth(c));
  return d;
}

void annotate_node(MechanismNode& node, const std::vector<int>& candidates) {
  node.candidates = candidates;
  for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
    if (node.kind == NodeKind::elicit &&
        i < static_cast<int>(node.options.size())) {
      std::vector<int> next(node.options[i]);
      std::sort(next.begin(), next.end());
      annotate_node(node.children[i], next);
    } else {
      annotate_node(node.children[i], candidates);
    }
  }
}

void dot_node(const MechanismNode& node, const Instance& inst,
              const std::string& path, std::ostringstream& os) {
  std::string id = "n";
  for (char c : path) id += (c == '/') ? '_' : c;
  switch (node.kind) {
    case NodeKind::menu:
      os << "  " << id << " [shape=diamond,label=\"menu\"];\n";
      break;
    case NodeKind::signal:
      os << "  " << id << " [shape=circle,label=\"S\"];\n";
      break;
    case NodeKind::elicit:
      os << "  " << id << " [shape=box,label=\"E\"];\n";
      break;
    case NodeKind::leaf:
      if (node.recommend) {
        os << "  " << id << " [shape=point,xlabel=\""
           << inst.actions[*node.recommend] << "\"];\n";
      } else {
        os << "  " << id << " [shape=point];\n";
      }
      break;
  }
  for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
    const std::string child_path = path_join(path, i);
    std::string child_id = "n";
    for (char c : child_path) child_id += (c == '/') ? '_' : c;
    std::string label;
    if (node.kind == NodeKind::signal) {
      label = node.strategy.signals[i];
    } else if (node.kind == NodeKind::elicit) {
      for (int j = 0; j < static_cast<int>(node.options[i].size()); ++j) {
        if (j) label += ",";
        label += inst.types[node.options[i][j]];
      }
    } else if (node.kind == NodeKind::menu) {
      label = std::to_string(i + 1);
    }
    os << "  " << id << " -> " << child_id << " [label=\"" << label
       << "\"];\n";
    dot_node(node.children[i], inst, child_path, os);
  }
}

}  // namespace

ValidationReport validate_mechanism(const Instance& inst,
                                    const MechanismTree& mech,
                                    double prob_tol) {
  ValidationReport report;
  std::vector<int> all_types(inst.num_types());
  for (int t = 0; t < inst.num_types(); ++t) all_types[t] = t;
  validate_node(inst, mech.root, "", all_types, prob_tol, report.violations);
  return report;
}

int depth(const MechanismTree& mech) { return node_depth(mech.root); }

MechanismTree annotate(MechanismTree mech, int num_types) {
  std::vector<int> all_types(num_types);
  for (int t = 0; t < num_types; ++t) all_types[t] = t;
  annotate_node(mech.root, all_types);
  return mech;
}

std::string to_dot(const MechanismTree& mech, const Instance& inst) {
  std::ostringstream os;
  os << "digraph \"" << (mech.name.empty() ? "mechanism" : mech.name)
     << "\" {\n";
  dot_node(mech.root, inst, "", os);
  os << "}\n";
  return os.str();
}

}  // namespace persuasion
