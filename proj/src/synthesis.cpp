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

#include "persuasion/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

std::vector<std::vector<int>> singleton_options(int num_types) {
  std::vector<std::vector<int>> options(num_types);
  for (int t = 0; t < num_types; ++t) options[t] = {t};
  return options;
}

// Solver output carries residuals around 1e-8; rows are cleaned to exact
// distributions so the synthesized tree passes strict validation.
void clean_row(std::vector<double>& row) {
  double sum = 0.0;
  for (double& p : row) {
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (sum <= 0.0) return;
  for (double& p : row) p /= sum;
}

}  // namespace

MechanismTree enses_tree(const Instance& inst, const EnsesSolution& sol,
                         SynthesisOptions opts) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  const double tol = opts.tolerance;
  const bool prune = opts.zero_branch == SynthesisOptions::ZeroBranch::prune;

  // A corrupted solution carries action mass where the recommendation has
  // none; reject it before any branch is pruned away.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int s = 0; s < ns; ++s) {
          if (sol.pi[i][s][j] > tol) continue;
          double mass = 0.0;
          for (int a = 0; a < na; ++a) mass += sol.phi[i][j][k][s][a];
          if (mass > tol) {
            throw DivisionDegeneracy(
                "flow mass without recommendation mass at branch " +
                std::to_string(i) + ", slot " + std::to_string(j));
          }
        }
      }
    }
  }

  std::vector<MechanismNode> branches;
  for (int i = 0; i < nt; ++i) {
    std::vector<int> kept;  // recommendation slots kept at this branch
    for (int j = 0; j < nt; ++j) {
      double mass = 0.0;
      for (int s = 0; s < ns; ++s) mass = std::max(mass, sol.pi[i][s][j]);
      if (!prune || mass > tol) kept.push_back(j);
    }

    SignalStrategy level1;
    std::vector<MechanismNode> elicits;
    for (int j : kept) level1.signals.push_back(inst.types[j]);
    level1.probs.assign(ns, std::vector<double>(kept.size(), 0.0));
    for (int s = 0; s < ns; ++s) {
      for (int c = 0; c < static_cast<int>(kept.size()); ++c) {
        level1.probs[s][c] = sol.pi[i][s][kept[c]];
      }
      clean_row(level1.probs[s]);
    }

    for (int j : kept) {
      std::vector<MechanismNode> reports;
      for (int k = 0; k < nt; ++k) {
        // Recover the conditional action kernel for report k.
        std::vector<int> kept_actions;
        for (int a = 0; a < na; ++a) {
          double mass = 0.0;
          for (int s = 0; s < ns; ++s) {
            mass = std::max(mass, sol.phi[i][j][k][s][a]);
          }
          if (!prune || mass > tol) kept_actions.push_back(a);
        }
        if (kept_actions.empty()) kept_actions.push_back(0);

        SignalStrategy level2;
        std::vector<MechanismNode> leaves;
        for (int a : kept_actions) {
          level2.signals.push_back(inst.actions[a]);
          leaves.push_back(MechanismNode::leaf(a));
        }
        level2.probs.assign(ns, std::vector<double>(kept_actions.size(), 0.0));
        for (int s = 0; s < ns; ++s) {
          const double rec_mass = sol.pi[i][s][j];
          double phi_mass = 0.0;
          for (int a = 0; a < na; ++a) phi_mass += sol.phi[i][j][k][s][a];
          if (rec_mass <= tol) {
            if (phi_mass > tol) {
              throw DivisionDegeneracy(
                  "flow mass without recommendation mass at branch " +
                  std::to_string(i) + ", slot " + std::to_string(j));
            }
            // Unreachable state: any valid row works.
            if (prune) {
              level2.probs[s][0] = 1.0;
            } else {
              for (auto& p : level2.probs[s]) {
                p = 1.0 / static_cast<double>(kept_actions.size());
              }
            }
            continue;
          }
          for (int c = 0; c < static_cast<int>(kept_actions.size()); ++c) {
            level2.probs[s][c] = sol.phi[i][j][k][s][kept_actions[c]] /
                                 rec_mass;
          }
          clean_row(level2.probs[s]);
        }
        reports.push_back(
            MechanismNode::signal(std::move(level2), std::move(leaves)));
      }
      elicits.push_back(
          MechanismNode::elicit(singleton_options(nt), std::move(reports)));
    }
    branches.push_back(
        MechanismNode::signal(std::move(level1), std::move(elicits)));
  }
  MechanismTree tree;
  tree.name = "enses";
  tree.root = MechanismNode::menu(std::move(branches));
  return tree;
}

MechanismTree ic_two_stage_tree(const Instance& inst,
                                const std::vector<Policy>& policies,
                                double tol) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  if (static_cast<int>(policies.size()) != nt) {
    throw InfeasiblePolicies("one policy per type required");
  }
  // Marginals match the prior.
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      double mass = 0.0;
      for (int a = 0; a < na; ++a) {
        if (policies[t][s][a] < -tol) {
          throw InfeasiblePolicies("negative policy mass");
        }
        mass += policies[t][s][a];
      }
      if (std::fabs(mass - inst.prior[s]) > tol) {
        throw InfeasiblePolicies("policy marginal does not match the prior");
      }
    }
  }
  auto value_for = [&](int listener, int branch) {
    double v = 0.0;
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        v += policies[branch][s][a] * inst.u(listener, s, a);
      }
    }
    return v;
  };
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      if (value_for(t, t2) > value_for(t, t) + tol) {
        throw InfeasiblePolicies("report-stage incentive constraint fails");
      }
    }
    for (int a = 0; a < na; ++a) {
      for (int b = 0; b < na; ++b) {
        double gap = 0.0;
        for (int s = 0; s < ns; ++s) {
          gap += policies[t][s][a] * (inst.u(t, s, a) - inst.u(t, s, b));
        }
        if (gap < -tol) {
          throw InfeasiblePolicies("action-stage incentive constraint fails");
        }
      }
    }
  }

  std::vector<MechanismNode> branches;
  for (int t = 0; t < nt; ++t) {
    std::vector<int> kept;
    for (int a = 0; a < na; ++a) {
      double mass = 0.0;
      for (int s = 0; s < ns; ++s) mass += policies[t][s][a];
      if (mass > tol) kept.push_back(a);
    }
    if (kept.empty()) kept.push_back(0);
    SignalStrategy strat;
    std::vector<MechanismNode> leaves;
    for (int a : kept) {
      strat.signals.push_back(inst.actions[a]);
      leaves.push_back(MechanismNode::leaf(a));
    }
    strat.probs.assign(ns, std::vector<double>(kept.size(), 0.0));
    for (int s = 0; s < ns; ++s) {
      if (inst.prior[s] <= tol) {
        strat.probs[s][0] = 1.0;
        continue;
      }
      for (int c = 0; c < static_cast<int>(kept.size()); ++c) {
        strat.probs[s][c] = policies[t][s][kept[c]] / inst.prior[s];
      }
      // Normalize away the dropped zero-mass columns' rounding residue.
      double sum = 0.0;
      for (double p : strat.probs[s]) sum += std::max(p, 0.0);
      if (sum > tol) {
        clean_row(strat.probs[s]);
      } else {
        for (double& p : strat.probs[s]) p = 0.0;
        strat.probs[s][0] = 1.0;
      }
    }
    branches.push_back(
        MechanismNode::signal(std::move(strat), std::move(leaves)));
  }
  MechanismTree tree;
  tree.name = "ic-two-stage";
  tree.root =
      MechanismNode::elicit(singleton_options(nt), std::move(branches));
  return tree;
}

MechanismTree mis_policy_tree(const Graph& graph,
                              const std::vector<int>& independent_set) {
  for (size_t i = 0; i < independent_set.size(); ++i) {
    for (size_t j = i + 1; j < independent_set.size(); ++j) {
      if (graph.has_edge(independent_set[i], independent_set[j])) {
        throw NotIndependent("vertices " +
                             std::to_string(independent_set[i]) + " and " +
                             std::to_string(independent_set[j]) +
                             " are adjacent");
      }
    }
  }
  const Instance inst = reduce_mis(graph);
  const int n = graph.n;
  std::vector<int> chosen(independent_set);
  std::sort(chosen.begin(), chosen.end());
  const int m = static_cast<int>(chosen.size());

  // Branches for vertex types reveal nothing; the special branch recommends
  // the chosen vertex's action matched to the state.
  std::vector<MechanismNode> branches;
  for (int v = 0; v < n; ++v) branches.push_back(MechanismNode::leaf());

  SignalStrategy strat;
  std::vector<MechanismNode> leaves;
  for (int c = 0; c < m; ++c) {
    const int a_idx = chosen[c];          // action a_v
    strat.signals.push_back(inst.actions[a_idx]);
    leaves.push_back(MechanismNode::leaf(a_idx));
  }
  for (int c = 0; c < m; ++c) {
    const int b_idx = n + chosen[c];      // action b_v
    strat.signals.push_back(inst.actions[b_idx]);
    leaves.push_back(MechanismNode::leaf(b_idx));
  }
  strat.probs.assign(2, std::vector<double>(2 * m, 0.0));
  for (int c = 0; c < m; ++c) {
    strat.probs[0][c] = 1.0 / m;
    strat.probs[1][m + c] = 1.0 / m;
  }
  branches.push_back(
      MechanismNode::signal(std::move(strat), std::move(leaves)));

  MechanismTree tree;
  tree.name = "mis-policy";
  tree.root =
      MechanismNode::elicit(singleton_options(n + 1), std::move(branches));
  return tree;
}

}  // namespace persuasion
