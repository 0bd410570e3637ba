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

#include "persuasion/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

struct NodeEval {
  double agent = 0.0;
  double principal = 0.0;
};

// Recorder is optional: best_response passes one, value-only queries don't.
struct Recorder {
  ResponseProfile* profile = nullptr;
  std::map<std::string, std::vector<int>>* support = nullptr;

  void belief_at(const std::string& path, const Belief& b) const {
    if (profile) profile->beliefs[path] = b;
    if (support) {
      std::vector<int> sup;
      for (int s = 0; s < b.size(); ++s) {
        if (b[s] > kZeroMarginal) sup.push_back(s);
      }
      (*support)[path] = sup;
    }
  }
};

class BestResponse {
 public:
  BestResponse(const Instance& inst, int type, double tie_tol)
      : inst_(inst), type_(type), tie_(tie_tol) {}

  NodeEval eval(const MechanismNode& node, const std::string& path,
                const Belief& belief, const std::vector<int>& candidates,
                const Recorder& rec) const {
    rec.belief_at(path, belief);
    switch (node.kind) {
      case NodeKind::leaf:
        return eval_leaf(node, path, belief, candidates, rec);
      case NodeKind::signal:
        return eval_signal(node, path, belief, candidates, rec);
      case NodeKind::menu:
        return eval_choice(node, path, belief, candidates, rec, false);
      case NodeKind::elicit:
        return eval_choice(node, path, belief, candidates, rec, true);
    }
    return {};
  }

 private:
  bool better(double cand_agent, double cand_principal, double best_agent,
              double best_principal) const {
    if (cand_agent > best_agent + tie_) return true;
    if (cand_agent < best_agent - tie_) return false;
    return cand_principal > best_principal + tie_;
  }

  NodeEval eval_leaf(const MechanismNode& node, const std::string& path,
                     const Belief& belief, const std::vector<int>& candidates,
                     const Recorder& rec) const {
    NodeEval best;
    LeafChoice choice;
    bool have = false;
    for (int imitated : candidates) {
      const int action =
          pinned_leaf_action(inst_, node, belief, imitated, tie_);
      const double agent = expected_agent_payoff(inst_, belief, type_, action);
      const double principal = expected_principal_payoff(inst_, belief, action);
      if (!have || better(agent, principal, best.agent, best.principal)) {
        best = {agent, principal};
        choice = {imitated, action};
        have = true;
      }
    }
    if (rec.profile) rec.profile->leaf_choices[path] = choice;
    return best;
  }

  NodeEval eval_signal(const MechanismNode& node, const std::string& path,
                       const Belief& belief,
                       const std::vector<int>& candidates,
                       const Recorder& rec) const {
    NodeEval total;
    for (int g = 0; g < node.strategy.num_signals(); ++g) {
      const double marginal = signal_marginal(belief, node.strategy, g);
      if (marginal <= kZeroMarginal) continue;  // pruned branch
      const Belief post = bayes_update(belief, node.strategy, g);
      const NodeEval child = eval(node.children[g], path_join(path, g), post,
                                  candidates, rec);
      total.agent += marginal * child.agent;
      total.principal += marginal * child.principal;
    }
    return total;
  }

  NodeEval eval_choice(const MechanismNode& node, const std::string& path,
                       const Belief& belief,
                       const std::vector<int>& candidates, const Recorder& rec,
                       bool binding) const {
    NodeEval best;
    int pick = -1;
    // Values first (without recording), then a recording pass down the
    // chosen branch only, so profiles cover exactly the reachable paths.
    for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
      std::vector<int> next = candidates;
      if (binding) {
        next = node.options[i];
        std::sort(next.begin(), next.end());
      }
      const NodeEval child = eval(node.children[i], path_join(path, i), belief,
                                  next, Recorder{});
      if (pick < 0 ||
          better(child.agent, child.principal, best.agent, best.principal)) {
        best = child;
        pick = i;
      }
    }
    if (rec.profile || rec.support) {
      if (rec.profile) rec.profile->choices[path] = pick;
      std::vector<int> next = candidates;
      if (binding) {
        next = node.options[pick];
        std::sort(next.begin(), next.end());
      }
      eval(node.children[pick], path_join(path, pick), belief, next, rec);
    }
    return best;
  }

  const Instance& inst_;
  int type_;
  double tie_;
};

std::vector<int> all_types(const Instance& inst) {
  std::vector<int> t(inst.num_types());
  for (int i = 0; i < inst.num_types(); ++i) t[i] = i;
  return t;
}

void require_valid(const Instance& inst, const MechanismTree& mech) {
  const auto inst_report = validate_instance(inst);
  if (!inst_report.ok()) {
    throw InvalidMechanism("invalid instance: " + inst_report.violations[0]);
  }
  const auto report = validate_mechanism(inst, mech);
  if (!report.ok()) {
    throw InvalidMechanism("invalid mechanism: " + report.violations[0]);
  }
}

}  // namespace

int pinned_leaf_action(const Instance& inst, const MechanismNode& leaf,
                       const Belief& belief, int imitated_type,
                       double tie_tol) {
  const std::vector<int> optimal =
      argmax_actions(inst, belief, imitated_type, tie_tol);
  if (leaf.recommend) {
    for (int a : optimal) {
      if (a == *leaf.recommend) return a;
    }
  }
  int best = optimal.front();
  double best_v = expected_principal_payoff(inst, belief, best);
  for (int a : optimal) {
    const double v = expected_principal_payoff(inst, belief, a);
    if (v > best_v + tie_tol) {
      best = a;
      best_v = v;
    }
  }
  return best;
}

double subtree_agent_value(const Instance& inst, const MechanismNode& node,
                           const Belief& belief,
                           const std::vector<int>& candidates, int type,
                           double tie_tol) {
  return BestResponse(inst, type, tie_tol)
      .eval(node, "", belief, candidates, Recorder{})
      .agent;
}

ResponseProfile best_response(const Instance& inst, const MechanismTree& mech,
                              int type, double tie_tol) {
  require_valid(inst, mech);
  ResponseProfile profile;
  profile.true_type = type;
  Recorder rec{&profile, nullptr};
  Belief prior{inst.prior};
  const NodeEval result = BestResponse(inst, type, tie_tol)
                              .eval(mech.root, "", prior, all_types(inst), rec);
  profile.agent_value = result.agent;
  return profile;
}

EvaluationReport evaluate(const Instance& inst, const MechanismTree& mech,
                          double tie_tol, bool parallel) {
  require_valid(inst, mech);
  EvaluationReport report;
  report.per_type.resize(inst.num_types());
  const Belief prior{inst.prior};
  const auto types = all_types(inst);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int t = 0; t < inst.num_types(); ++t) {
    TypeOutcome& out = report.per_type[t];
    out.profile.true_type = t;
    std::map<std::string, std::vector<int>> support;
    Recorder rec{&out.profile, &support};
    const NodeEval result =
        BestResponse(inst, t, tie_tol).eval(mech.root, "", prior, types, rec);
    out.profile.agent_value = result.agent;
    out.agent_value = result.agent;
    out.principal_value = result.principal;
#ifdef _OPENMP
#pragma omp critical
#endif
    {
      for (auto& [path, sup] : support) {
        report.posterior_support.emplace(path, std::move(sup));
      }
    }
  }
  (void)parallel;

  double total = 0.0;
  for (int t = 0; t < inst.num_types(); ++t) {
    total += inst.type_dist[t] * report.per_type[t].principal_value;
  }
  report.principal_value = total;
  return report;
}

namespace {

// Plan enumeration for the oracle. Frames carry the path measure so a
// complete plan's value is the sum of its leaf contributions; no per-node
// maximization happens anywhere in here.
struct Frame {
  const MechanismNode* node;
  Belief belief;
  std::vector<int> candidates;
  double weight;
};

class PlanEnumerator {
 public:
  PlanEnumerator(const Instance& inst, int type, long long cap, double tie_tol)
      : inst_(inst), type_(type), cap_(cap), tie_(tie_tol) {}

  double run(std::vector<Frame> work) {
    best_ = -std::numeric_limits<double>::infinity();
    count_ = 0;
    recurse(work, 0.0);
    return best_;
  }

  long long plans() const { return count_; }

 private:
  void recurse(std::vector<Frame>& work, double acc) {
    if (work.empty()) {
      if (++count_ > cap_) {
        throw ExplosionCap("pure profile count exceeds cap " +
                           std::to_string(cap_));
      }
      best_ = std::max(best_, acc);
      return;
    }
    Frame frame = std::move(work.back());
    work.pop_back();
    const MechanismNode& node = *frame.node;
    switch (node.kind) {
      case NodeKind::leaf: {
        for (int imitated : frame.candidates) {
          const int action =
              pinned_leaf_action(inst_, node, frame.belief, imitated, tie_);
          const double value =
              expected_agent_payoff(inst_, frame.belief, type_, action);
          recurse(work, acc + frame.weight * value);
        }
        break;
      }
      case NodeKind::signal: {
        const size_t mark = work.size();
        for (int g = 0; g < node.strategy.num_signals(); ++g) {
          const double marginal =
              signal_marginal(frame.belief, node.strategy, g);
          if (marginal <= kZeroMarginal) continue;
          work.push_back(Frame{&node.children[g],
                               bayes_update(frame.belief, node.strategy, g),
                               frame.candidates, frame.weight * marginal});
        }
        recurse(work, acc);
        work.resize(mark);
        break;
      }
      case NodeKind::menu:
      case NodeKind::elicit: {
        for (int i = 0; i < static_cast<int>(node.children.size()); ++i) {
          std::vector<int> next = frame.candidates;
          if (node.kind == NodeKind::elicit) {
            next = node.options[i];
            std::sort(next.begin(), next.end());
          }
          work.push_back(Frame{&node.children[i], frame.belief,
                               std::move(next), frame.weight});
          recurse(work, acc);
          work.pop_back();
        }
        break;
      }
    }
    work.push_back(std::move(frame));
  }

  const Instance& inst_;
  int type_;
  long long cap_;
  double tie_;
  double best_;
  long long count_;
};

}  // namespace

double brute_force_response(const Instance& inst, const MechanismTree& mech,
                            int type, long long cap, double tie_tol,
                            bool parallel) {
  require_valid(inst, mech);
  const Belief prior{inst.prior};
  std::vector<int> types(inst.num_types());
  for (int t = 0; t < inst.num_types(); ++t) types[t] = t;

  const MechanismNode& root = mech.root;
  const bool splittable =
      parallel &&
      (root.kind == NodeKind::menu || root.kind == NodeKind::elicit) &&
      root.children.size() > 1;
  if (!splittable) {
    PlanEnumerator en(inst, type, cap, tie_tol);
    return en.run({Frame{&root, prior, types, 1.0}});
  }

  // Split the sweep on the root's branches; each chunk is an independent
  // enumeration with its share of the cap.
  const int n = static_cast<int>(root.children.size());
  std::vector<double> values(n);
  std::vector<std::string> errors(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      std::vector<int> next = types;
      if (root.kind == NodeKind::elicit) {
        next = root.options[i];
        std::sort(next.begin(), next.end());
      }
      PlanEnumerator en(inst, type, cap, tie_tol);
      values[i] = en.run({Frame{&root.children[i], prior, next, 1.0}});
    } catch (const Error& e) {
      errors[i] = e.what();
      values[i] = -std::numeric_limits<double>::infinity();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw ExplosionCap(e);
  }
  return *std::max_element(values.begin(), values.end());
}

namespace {

struct EnsesShape {
  // posteriors[i][j]: posterior at E_ij (after signal j at branch i); the
  // marginal of that signal under the prior.
  std::vector<std::vector<Belief>> posteriors;
  std::vector<std::vector<double>> marginals;
};

void shape_error(const std::string& what) { throw ShapeMismatch(what); }

}  // namespace

MultistageIcReport check_multistage_ic(const Instance& inst,
                                       const MechanismTree& mech,
                                       double tol) {
  require_valid(inst, mech);
  const int n = inst.num_types();
  const MechanismNode& root = mech.root;
  if (root.kind != NodeKind::menu) shape_error("root is not a menu node");
  if (static_cast<int>(root.children.size()) != n) {
    shape_error("menu does not have one branch per type");
  }
  for (const auto& branch : root.children) {
    if (branch.kind != NodeKind::signal) {
      shape_error("menu branch is not a signaling node");
    }
    for (const auto& elicit : branch.children) {
      if (elicit.kind != NodeKind::elicit) {
        shape_error("second-level child is not an elicitation node");
      }
      if (static_cast<int>(elicit.options.size()) != n) {
        shape_error("elicitation is not direct over all types");
      }
      for (int k = 0; k < n; ++k) {
        if (elicit.options[k] != std::vector<int>{k}) {
          shape_error("elicitation options are not singleton types in order");
        }
        const auto& rec_node = elicit.children[k];
        if (rec_node.kind != NodeKind::signal) {
          shape_error("post-report node is not a signaling node");
        }
        for (const auto& leaf : rec_node.children) {
          if (leaf.kind != NodeKind::leaf || !leaf.recommend) {
            shape_error("terminal node lacks an action recommendation");
          }
        }
      }
    }
  }

  MultistageIcReport report;
  report.ic_at_menu.assign(n, true);
  const Belief prior{inst.prior};
  std::vector<int> types(n);
  for (int t = 0; t < n; ++t) types[t] = t;

  // Menu level: branch i must maximize type i's continuation value.
  std::vector<std::vector<double>> branch_value(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      branch_value[i][l] =
          subtree_agent_value(inst, root.children[l], prior, types, i);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      if (branch_value[i][l] > branch_value[i][i] + tol) {
        report.ic_at_menu[i] = false;
        std::ostringstream os;
        os << "type " << inst.types[i] << " prefers menu option " << (l + 1)
           << " over option " << (i + 1);
        report.violations.push_back(os.str());
      }
    }
  }

  // Report level: a type-i agent recommended to report t_j must weakly prefer
  // doing so over any other report, branch by branch.
  for (int i = 0; i < n; ++i) {
    const MechanismNode& branch = root.children[i];
    for (int j = 0; j < static_cast<int>(branch.children.size()); ++j) {
      const double marginal = signal_marginal(prior, branch.strategy, j);
      if (marginal <= kZeroMarginal) {
        report.dic_at_si[{i, j}] = true;
        continue;
      }
      const Belief post = bayes_update(prior, branch.strategy, j);
      const MechanismNode& elicit = branch.children[j];
      const int recommended_type =
          inst.type_index(branch.strategy.signals[j]).value_or(j);
      std::vector<double> value(n);
      for (int k = 0; k < n; ++k) {
        value[k] =
            subtree_agent_value(inst, elicit.children[k], post, {k}, i);
      }
      bool ok = true;
      for (int k = 0; k < n; ++k) {
        if (value[k] > value[recommended_type] + tol) ok = false;
      }
      report.dic_at_si[{i, j}] = ok;
      if (!ok) {
        std::ostringstream os;
        os << "type " << inst.types[i] << " deviates from recommended report "
           << inst.types[recommended_type] << " in branch " << (i + 1);
        report.violations.push_back(os.str());
      }
    }
  }

  // Action level: every recommended action must be optimal for the reported
  // type under its induced posterior.
  for (int i = 0; i < n; ++i) {
    const MechanismNode& branch = root.children[i];
    for (int j = 0; j < static_cast<int>(branch.children.size()); ++j) {
      const double mj = signal_marginal(prior, branch.strategy, j);
      if (mj <= kZeroMarginal) continue;
      const Belief post = bayes_update(prior, branch.strategy, j);
      const MechanismNode& elicit = branch.children[j];
      for (int k = 0; k < n; ++k) {
        const MechanismNode& rec_node = elicit.children[k];
        bool ok = true;
        for (int g = 0; g < rec_node.strategy.num_signals(); ++g) {
          const double mg = signal_marginal(post, rec_node.strategy, g);
          if (mg <= kZeroMarginal) continue;
          const Belief q = bayes_update(post, rec_node.strategy, g);
          const int action = *rec_node.children[g].recommend;
          const double got = expected_agent_payoff(inst, q, k, action);
          for (int b = 0; b < inst.num_actions(); ++b) {
            if (expected_agent_payoff(inst, q, k, b) > got + tol) ok = false;
          }
        }
        report.dic_at_sijk[{i, j, k}] = ok;
        if (!ok) {
          std::ostringstream os;
          os << "recommended action suboptimal for reported type "
             << inst.types[k] << " (branch " << (i + 1) << ", report slot "
             << j << ")";
          report.violations.push_back(os.str());
        }
      }
    }
  }
  return report;
}

}  // namespace persuasion
