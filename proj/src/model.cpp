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

#include "persuasion/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

namespace {

std::optional<int> find_label(const std::vector<std::string>& labels,
                              const std::string& label) {
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

void check_distribution(const std::vector<double>& p, const std::string& what,
                        double tol, std::vector<std::string>& out) {
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(p.size()); ++i) {
    if (!std::isfinite(p[i])) {
      std::ostringstream os;
      os << what << "[" << i << "] is not finite";
      out.push_back(os.str());
      return;
    }
    if (p[i] < -tol) {
      std::ostringstream os;
      os << what << "[" << i << "] negative probability " << p[i];
      out.push_back(os.str());
    }
    sum += p[i];
  }
  if (std::fabs(sum - 1.0) > tol) {
    std::ostringstream os;
    os << what << " sums to " << sum;
    out.push_back(os.str());
  }
}

void check_unique(const std::vector<std::string>& labels,
                  const std::string& what, std::vector<std::string>& out) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      out.push_back(what + " label '" + l + "' is duplicated");
    }
  }
}

}  // namespace

std::optional<int> Instance::state_index(const std::string& label) const {
  return find_label(states, label);
}
std::optional<int> Instance::type_index(const std::string& label) const {
  return find_label(types, label);
}
std::optional<int> Instance::action_index(const std::string& label) const {
  return find_label(actions, label);
}

Belief uniform_belief(int num_states) {
  return Belief{std::vector<double>(num_states, 1.0 / num_states)};
}

Belief point_mass(int state, int num_states) {
  Belief b{std::vector<double>(num_states, 0.0)};
  b.probs[state] = 1.0;
  return b;
}

ValidationReport validate_instance(const Instance& inst, double prob_tol) {
  ValidationReport report;
  auto& out = report.violations;

  if (inst.states.empty()) out.push_back("states is empty");
  if (inst.types.empty()) out.push_back("types is empty");
  if (inst.actions.empty()) out.push_back("actions is empty");
  check_unique(inst.states, "state", out);
  check_unique(inst.types, "type", out);
  check_unique(inst.actions, "action", out);

  if (static_cast<int>(inst.prior.size()) != inst.num_states()) {
    out.push_back("prior length does not match states");
  } else {
    check_distribution(inst.prior, "prior", prob_tol, out);
  }
  if (static_cast<int>(inst.type_dist.size()) != inst.num_types()) {
    out.push_back("type_dist length does not match types");
  } else {
    check_distribution(inst.type_dist, "type_dist", prob_tol, out);
  }

  if (static_cast<int>(inst.agent_payoff.size()) != inst.num_types()) {
    out.push_back("agent_payoff outer dimension does not match types");
  } else {
    for (int t = 0; t < inst.num_types(); ++t) {
      if (static_cast<int>(inst.agent_payoff[t].size()) != inst.num_states()) {
        out.push_back("agent_payoff[" + std::to_string(t) +
                      "] does not match states");
        continue;
      }
      for (int s = 0; s < inst.num_states(); ++s) {
        if (static_cast<int>(inst.agent_payoff[t][s].size()) !=
            inst.num_actions()) {
          out.push_back("agent_payoff[" + std::to_string(t) + "][" +
                        std::to_string(s) + "] does not match actions");
          continue;
        }
        for (int a = 0; a < inst.num_actions(); ++a) {
          if (!std::isfinite(inst.agent_payoff[t][s][a])) {
            std::ostringstream os;
            os << "agent_payoff[" << t << "][" << s << "][" << a
               << "] is not finite";
            out.push_back(os.str());
          }
        }
      }
    }
  }

  if (static_cast<int>(inst.principal_payoff.size()) != inst.num_states()) {
    out.push_back("principal_payoff outer dimension does not match states");
  } else {
    for (int s = 0; s < inst.num_states(); ++s) {
      if (static_cast<int>(inst.principal_payoff[s].size()) !=
          inst.num_actions()) {
        out.push_back("principal_payoff[" + std::to_string(s) +
                      "] does not match actions");
        continue;
      }
      for (int a = 0; a < inst.num_actions(); ++a) {
        if (!std::isfinite(inst.principal_payoff[s][a])) {
          std::ostringstream os;
          os << "principal_payoff[" << s << "][" << a << "] is not finite";
          out.push_back(os.str());
        }
      }
    }
  }
  return report;
}

double signal_marginal(const Belief& belief, const SignalStrategy& strat,
                       int signal) {
  double m = 0.0;
  for (int s = 0; s < belief.size(); ++s) {
    m += belief[s] * strat.probs[s][signal];
  }
  return m;
}

Belief bayes_update(const Belief& belief, const SignalStrategy& strat,
                    int signal) {
  const double marginal = signal_marginal(belief, strat, signal);
  if (marginal <= kZeroMarginal) {
    throw ZeroProbabilitySignal("signal '" + strat.signals[signal] +
                                "' has zero marginal probability");
  }
  Belief post{std::vector<double>(belief.size(), 0.0)};
  for (int s = 0; s < belief.size(); ++s) {
    post.probs[s] = belief[s] * strat.probs[s][signal] / marginal;
  }
  return post;
}

double expected_agent_payoff(const Instance& inst, const Belief& belief,
                             int type, int action) {
  double value = 0.0;
  for (int s = 0; s < inst.num_states(); ++s) {
    value += belief[s] * inst.u(type, s, action);
  }
  return value;
}

double expected_principal_payoff(const Instance& inst, const Belief& belief,
                                 int action) {
  double value = 0.0;
  for (int s = 0; s < inst.num_states(); ++s) {
    value += belief[s] * inst.v(s, action);
  }
  return value;
}

std::vector<int> argmax_actions(const Instance& inst, const Belief& belief,
                                int type, double tie_tol) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> values(inst.num_actions());
  for (int a = 0; a < inst.num_actions(); ++a) {
    values[a] = expected_agent_payoff(inst, belief, type, a);
    best = std::max(best, values[a]);
  }
  std::vector<int> out;
  for (int a = 0; a < inst.num_actions(); ++a) {
    if (values[a] >= best - tie_tol) out.push_back(a);
  }
  return out;
}

}  // namespace persuasion
