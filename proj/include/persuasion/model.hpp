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

#ifndef PERSUASION_MODEL_HPP
#define PERSUASION_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

namespace persuasion {

// Global numeric conventions. All of them can be overridden per call; the CLI
// threads its --tolerance flag through to the checks that take one.
inline constexpr double kProbTol = 1e-9;       // distribution validity
inline constexpr double kTieTol = 1e-9;        // optimality ties
inline constexpr double kLpFeasTol = 1e-7;     // LP feasibility residuals
inline constexpr double kIcTol = 1e-6;         // multi-stage IC checks
inline constexpr double kZeroMarginal = 1e-12; // pruned signal branches

// A persuasion game. Labels exist only at the I/O boundary; every operation
// below identifies states/types/actions by index into these lists.
struct Instance {
  std::vector<std::string> states;
  std::vector<std::string> types;
  std::vector<std::string> actions;
  std::vector<double> prior;      // over states
  std::vector<double> type_dist;  // over types
  // agent_payoff[type][state][action], principal_payoff[state][action]
  std::vector<std::vector<std::vector<double>>> agent_payoff;
  std::vector<std::vector<double>> principal_payoff;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_types() const { return static_cast<int>(types.size()); }
  int num_actions() const { return static_cast<int>(actions.size()); }

  double u(int type, int state, int action) const {
    return agent_payoff[type][state][action];
  }
  double v(int state, int action) const {
    return principal_payoff[state][action];
  }

  std::optional<int> state_index(const std::string& label) const;
  std::optional<int> type_index(const std::string& label) const;
  std::optional<int> action_index(const std::string& label) const;
};

// Posterior over states, same ordering as Instance::states.
struct Belief {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
  double operator[](int state) const { return probs[state]; }
};

Belief uniform_belief(int num_states);
Belief point_mass(int state, int num_states);

// Committed signaling step: probs[state][signal] is a distribution per state.
struct SignalStrategy {
  std::vector<std::string> signals;
  std::vector<std::vector<double>> probs;

  int num_signals() const { return static_cast<int>(signals.size()); }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_instance(const Instance& inst,
                                   double prob_tol = kProbTol);

// Marginal probability of a signal under (belief, strategy).
double signal_marginal(const Belief& belief, const SignalStrategy& strat,
                       int signal);

// Posterior after observing `signal`. Throws ZeroProbabilitySignal when the
// marginal is <= kZeroMarginal.
Belief bayes_update(const Belief& belief, const SignalStrategy& strat,
                    int signal);

double expected_agent_payoff(const Instance& inst, const Belief& belief,
                             int type, int action);
double expected_principal_payoff(const Instance& inst, const Belief& belief,
                                 int action);

// Actions maximizing the type's expected utility under `belief`, every action
// within `tie_tol` of the maximum, ascending by index so downstream
// tie-breaking is deterministic.
std::vector<int> argmax_actions(const Instance& inst, const Belief& belief,
                                int type, double tie_tol = kTieTol);

}  // namespace persuasion

#endif  // PERSUASION_MODEL_HPP
