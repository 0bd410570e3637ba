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

#include "persuasion/instances.hpp"

#include <algorithm>
#include <istream>
#include <random>
#include <sstream>

#include "persuasion/errors.hpp"

namespace persuasion {

bool Graph::has_edge(int a, int b) const {
  for (const auto& [u, v] : edges) {
    if ((u == a && v == b) || (u == b && v == a)) return true;
  }
  return false;
}

Graph make_complete(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  }
  return g;
}

Graph make_cycle(int n) {
  Graph g{n, {}};
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
  return g;
}

Graph make_path(int n) {
  Graph g{n, {}};
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1});
  return g;
}

Graph make_star(int leaves) {
  Graph g{leaves + 1, {}};
  for (int i = 1; i <= leaves; ++i) g.edges.push_back({0, i});
  return g;
}

Graph make_edgeless(int n) { return Graph{n, {}}; }

namespace {

Instance base_instance(std::vector<std::string> states,
                       std::vector<std::string> types,
                       std::vector<std::string> actions,
                       std::vector<double> prior,
                       std::vector<double> type_dist) {
  Instance inst;
  inst.states = std::move(states);
  inst.types = std::move(types);
  inst.actions = std::move(actions);
  inst.prior = std::move(prior);
  inst.type_dist = std::move(type_dist);
  inst.agent_payoff.assign(
      inst.num_types(),
      std::vector<std::vector<double>>(
          inst.num_states(), std::vector<double>(inst.num_actions(), 0.0)));
  inst.principal_payoff.assign(
      inst.num_states(), std::vector<double>(inst.num_actions(), 0.0));
  return inst;
}

Instance make_ex1(const ExampleParams& params) {
  std::vector<double> rho = params.rho;
  if (rho.empty()) rho = {0.5, 0.5};
  if (rho.size() != 2) throw BadParams("ex1 rho must have two entries");
  Instance inst = base_instance({"theta1", "theta2"}, {"t1", "t2"},
                                {"a", "b", "c", "d"}, {0.5, 0.5}, rho);
  inst.agent_payoff[0] = {{4, 1, 3, 0}, {1, 4, 0, 3}};
  inst.agent_payoff[1] = {{0, 0, 1, 0}, {0, 0, 0, 1}};
  inst.principal_payoff = {{0, 0, 1, 1}, {0, 0, 1, 1}};
  return inst;
}

Instance make_ex2() {
  const double third = 1.0 / 3.0;
  Instance inst =
      base_instance({"alpha", "beta", "gamma"}, {"t0", "t1"},
                    {"a", "a'", "b", "b'"}, {third, third, third}, {0.5, 0.5});
  inst.agent_payoff[0] = {{0, 1, 0, 1}, {0, 1, 0, 1}, {0, 1, 0, 1}};
  inst.agent_payoff[1] = {{3, 2, -2, -3}, {-2, -3, 3, 2}, {0, -10, 0, -10}};
  inst.principal_payoff = {{0, 1, 0, 1}, {0, 1, 0, 1}, {0, 1, 0, 1}};
  return inst;
}

double ex3_big_m(const ExampleParams& params) {
  const double m = params.big_m > 0 ? params.big_m : 10001.0;
  if (m <= 10000.0) throw BadParams("ex3 requires big_m > 10000");
  return m;
}

Instance make_ex3(const ExampleParams& params) {
  const double m = ex3_big_m(params);
  const double third = 1.0 / 3.0;
  Instance inst = base_instance({"alpha", "beta", "gamma"}, {"t1", "t2"},
                                {"a", "a'", "b", "b'", "d"},
                                {third, third, third}, {0.5, 0.5});
  inst.agent_payoff[0] = {
      {-m, 1, -m, -m, 0}, {-m, -m, 3, 2, 0}, {-m, -1, -m, -m, 0}};
  inst.agent_payoff[1] = {
      {3, 2, -m, -m, 0}, {-m, -m, -m, 1, 0}, {-m, -m, -m, -1, 0}};
  inst.principal_payoff = {
      {0, 1, 0, 1, 0}, {0, 1, 0, 1, 0}, {0, 1, 0, 1, 0}};
  return inst;
}

Instance make_ex4() {
  Instance inst = base_instance({"alpha", "beta"}, {"t0", "t1", "t2"},
                                {"a", "a'", "b", "b'"}, {0.5, 0.5},
                                {1.0, 0.0, 0.0});
  inst.agent_payoff[0] = {{1, 0, -2, -3}, {-2, -3, 1, 0}};
  inst.agent_payoff[1] = {{-1, 1, -1, -1}, {-1, 1, -1, -1}};
  inst.agent_payoff[2] = {{-1, -1, -1, 1}, {-1, -1, -1, 1}};
  inst.principal_payoff = {{0, 1, 0, 0}, {0, 0, 0, 1}};
  return inst;
}

Instance make_ex5(const ExampleParams& params) {
  const int n = params.n;
  if (n < 1) throw BadParams("ex5 requires n >= 1");
  const double m = params.big_m > 0 ? params.big_m : 1e6;
  std::vector<std::string> states, types, actions;
  for (int i = 1; i <= n; ++i) states.push_back("theta" + std::to_string(i));
  for (int i = 0; i <= n; ++i) types.push_back("t" + std::to_string(i));
  for (int i = 1; i <= n; ++i) actions.push_back("a" + std::to_string(i));
  for (int i = 1; i <= n; ++i) {
    actions.push_back("a" + std::to_string(i) + "'");
  }
  std::vector<double> rho(n + 1, 0.0);
  rho[0] = 1.0;
  Instance inst =
      base_instance(std::move(states), std::move(types), std::move(actions),
                    std::vector<double>(n, 1.0 / n), std::move(rho));
  // Baseline payoffs shared by every type: 1 on the plain-action diagonal,
  // the primed block is -M off the diagonal, 0 on it except the last state.
  for (int s = 0; s < n; ++s) {
    for (int j = 0; j < n; ++j) {
      inst.agent_payoff[0][s][j] = (s == j) ? 1.0 : 0.0;
      inst.agent_payoff[0][s][n + j] = (s == j) ? 0.0 : -m;
    }
  }
  inst.agent_payoff[0][n - 1][2 * n - 1] = 1.0;
  for (int k = 1; k <= n; ++k) {
    inst.agent_payoff[k] = inst.agent_payoff[0];
    for (int j = 0; j < k; ++j) inst.agent_payoff[k][j][j] = 0.0;
    inst.agent_payoff[k][k - 1][n + k - 1] = 1.0 / m;
  }
  for (int s = 0; s < n; ++s) inst.principal_payoff[s][n + s] = 1.0;
  return inst;
}

MechanismNode full_revelation(const Instance& inst,
                              const std::vector<MechanismNode>& leaves,
                              const std::string& prefix) {
  SignalStrategy strat;
  for (const auto& s : inst.states) strat.signals.push_back(prefix + s);
  strat.probs.assign(inst.num_states(),
                     std::vector<double>(inst.num_states(), 0.0));
  for (int s = 0; s < inst.num_states(); ++s) strat.probs[s][s] = 1.0;
  return MechanismNode::signal(std::move(strat), leaves);
}

MechanismTree make_ex1_trade(const ExampleParams& params) {
  const Instance inst = make_ex1(params);
  std::vector<MechanismNode> reveal_leaves(2, MechanismNode::leaf());
  MechanismTree tree;
  tree.name = "ex1_trade";
  tree.root = MechanismNode::elicit(
      {{0}, {1}},
      {MechanismNode::leaf(), full_revelation(inst, reveal_leaves, "g_")});
  return tree;
}

MechanismTree make_ex2_ses() {
  // Pre-signal separates gamma; afterwards the t0 branch fully separates
  // alpha from beta with action recommendations, the t1 branch is silent.
  SignalStrategy pre;
  pre.signals = {"g_gamma", "g_not_gamma"};
  pre.probs = {{0, 1}, {0, 1}, {1, 0}};

  SignalStrategy t0_strat;
  t0_strat.signals = {"a'", "b'"};
  t0_strat.probs = {{1, 0}, {0, 1}, {1, 0}};  // gamma row is unreachable
  MechanismNode t0_branch = MechanismNode::signal(
      std::move(t0_strat), {MechanismNode::leaf(1), MechanismNode::leaf(3)});

  SignalStrategy t1_strat;
  t1_strat.signals = {"a"};
  t1_strat.probs = {{1}, {1}, {1}};
  MechanismNode t1_branch =
      MechanismNode::signal(std::move(t1_strat), {MechanismNode::leaf(0)});

  MechanismNode elicit = MechanismNode::elicit(
      {{0}, {1}}, {std::move(t0_branch), std::move(t1_branch)});
  MechanismTree tree;
  tree.name = "ex2_ses";
  tree.root = MechanismNode::signal(
      std::move(pre), {MechanismNode::leaf(), std::move(elicit)});
  return tree;
}

MechanismTree make_ex3_fig2(const ExampleParams& params) {
  const Instance inst = make_ex3(params);
  const double m = ex3_big_m(params);
  const double delta = params.delta > 0 ? params.delta : 10.0 / m;

  auto reveal_pair = [&](int first_state, int second_state) {
    // Two-signal revelation restricted to the reachable posterior support.
    SignalStrategy strat;
    strat.signals = {"g_" + inst.states[first_state],
                     "g_" + inst.states[second_state]};
    strat.probs.assign(3, std::vector<double>(2, 0.0));
    for (int s = 0; s < 3; ++s) {
      if (s == second_state) {
        strat.probs[s][1] = 1.0;
      } else {
        strat.probs[s][0] = 1.0;  // unreachable third state rides along
      }
    }
    return MechanismNode::signal(
        std::move(strat), {MechanismNode::leaf(), MechanismNode::leaf()});
  };

  // Branch for option 1: mixes alpha with gamma, separates beta only after a
  // report of t2.
  SignalStrategy s1;
  s1.signals = {"g_alpha_gamma", "g_beta_gamma"};
  s1.probs = {{1, 0}, {0, 1}, {1 - delta, delta}};
  MechanismNode e1 = MechanismNode::elicit(
      {{0}, {1}}, {MechanismNode::leaf(), reveal_pair(1, 2)});
  MechanismNode branch1 = MechanismNode::signal(
      std::move(s1), {MechanismNode::leaf(), std::move(e1)});

  // Option 2 swaps the roles of alpha and beta.
  SignalStrategy s2;
  s2.signals = {"g_alpha_gamma", "g_beta_gamma"};
  s2.probs = {{1, 0}, {0, 1}, {delta, 1 - delta}};
  MechanismNode e2 = MechanismNode::elicit(
      {{0}, {1}}, {reveal_pair(0, 2), MechanismNode::leaf()});
  MechanismNode branch2 = MechanismNode::signal(
      std::move(s2), {std::move(e2), MechanismNode::leaf()});

  MechanismTree tree;
  tree.name = "ex3_fig2";
  tree.root = MechanismNode::menu({std::move(branch1), std::move(branch2)});
  return tree;
}

MechanismTree make_ex4_pie() {
  const Instance inst = make_ex4();
  auto second_round = [&]() {
    return MechanismNode::elicit(
        {{1}, {2}}, {MechanismNode::leaf(), MechanismNode::leaf()});
  };
  MechanismNode reveal =
      full_revelation(inst, {second_round(), second_round()}, "g_");
  MechanismTree tree;
  tree.name = "ex4_pie";
  tree.root = MechanismNode::elicit(
      {{0}, {1, 2}}, {MechanismNode::leaf(), std::move(reveal)});
  return tree;
}

MechanismTree make_ex5_pie(const ExampleParams& params) {
  const int n = params.n;
  if (n < 1) throw BadParams("ex5_pie requires n >= 1");
  // Build bottom-up: S_n has a zero-probability continuation branch, each
  // E_i offers "is your type t_i?" and each S_i separates theta_i.
  MechanismNode below = MechanismNode::leaf();
  for (int i = n; i >= 1; --i) {
    SignalStrategy strat;
    strat.signals = {"g" + std::to_string(i), "g_gt" + std::to_string(i)};
    strat.probs.assign(n, std::vector<double>(2, 0.0));
    for (int s = 0; s < n; ++s) {
      if (s == i - 1) {
        strat.probs[s][0] = 1.0;
      } else {
        strat.probs[s][1] = 1.0;
      }
    }
    MechanismNode snode = MechanismNode::signal(
        std::move(strat), {MechanismNode::leaf(), std::move(below)});
    std::vector<int> rest;
    for (int t = i; t <= n; ++t) rest.push_back(t);
    below = MechanismNode::elicit({{i - 1}, std::move(rest)},
                                  {MechanismNode::leaf(), std::move(snode)});
  }
  MechanismTree tree;
  tree.name = "ex5_pie";
  tree.root = std::move(below);
  return tree;
}

}  // namespace

Instance example_instance(const std::string& id, ExampleParams params) {
  if (id == "ex1") return make_ex1(params);
  if (id == "ex2") return make_ex2();
  if (id == "ex3") return make_ex3(params);
  if (id == "ex4") return make_ex4();
  if (id == "ex5") return make_ex5(params);
  throw BadParams("unknown example instance id '" + id + "'");
}

MechanismTree example_mechanism(const std::string& id, ExampleParams params) {
  if (id == "ex1_trade") return make_ex1_trade(params);
  if (id == "ex2_ses") return make_ex2_ses();
  if (id == "ex3_fig2") return make_ex3_fig2(params);
  if (id == "ex4_pie") return make_ex4_pie();
  if (id == "ex5_pie") return make_ex5_pie(params);
  throw BadParams("unknown example mechanism id '" + id + "'");
}

std::vector<std::string> example_instance_ids() {
  return {"ex1", "ex2", "ex3", "ex4", "ex5"};
}

std::vector<std::string> example_mechanism_ids() {
  return {"ex1_trade", "ex2_ses", "ex3_fig2", "ex4_pie", "ex5_pie"};
}

Instance reduce_mis(const Graph& g) {
  const int n = g.n;
  if (n < 1) throw BadParams("reduction needs at least one vertex");
  std::vector<std::string> types, actions;
  for (int v = 1; v <= n; ++v) types.push_back("t_v" + std::to_string(v));
  types.push_back("t*");
  for (int v = 1; v <= n; ++v) actions.push_back("a_v" + std::to_string(v));
  for (int v = 1; v <= n; ++v) actions.push_back("b_v" + std::to_string(v));
  actions.push_back("a0");
  actions.push_back("b0");
  std::vector<double> rho(n + 1, 1.0 / n);
  rho[n] = 0.0;

  Instance inst =
      base_instance({"theta1", "theta2"}, std::move(types),
                    std::move(actions), {0.5, 0.5}, std::move(rho));
  const double inv_n = 1.0 / n;
  const int a0 = 2 * n, b0 = 2 * n + 1;
  for (int v = 0; v < n; ++v) {
    auto& u = inst.agent_payoff[v];
    u[0][a0] = 1.0 + inv_n;
    u[1][a0] = -1.0 + inv_n;
    u[0][b0] = -1.0 + inv_n;
    u[1][b0] = 1.0 + inv_n;
    for (int w = 0; w < n; ++w) {
      double value_a1, value_a2, value_b1, value_b2;
      if (w == v) {
        value_a1 = 1.0;
        value_a2 = -1.0;
        value_b1 = -1.0;
        value_b2 = 1.0;
      } else if (g.has_edge(v, w)) {
        value_a1 = value_a2 = value_b1 = value_b2 = -static_cast<double>(n);
      } else {
        value_a1 = value_a2 = value_b1 = value_b2 = 0.0;
      }
      u[0][w] = value_a1;
      u[1][w] = value_a2;
      u[0][n + w] = value_b1;
      u[1][n + w] = value_b2;
    }
  }
  auto& star = inst.agent_payoff[n];
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2 * n; ++a) star[s][a] = 1.0;
    star[s][a0] = -1.0;
    star[s][b0] = -1.0;
  }
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2 * n; ++a) inst.principal_payoff[s][a] = 1.0;
  }
  return inst;
}

namespace {

void mis_search(const Graph& g, int v, std::vector<int>& current,
                std::vector<bool>& blocked, MisResult& best) {
  const int n = g.n;
  if (static_cast<int>(current.size()) + (n - v) <= best.size) return;
  if (v == n) {
    if (static_cast<int>(current.size()) > best.size) {
      best.size = static_cast<int>(current.size());
      best.witness = current;
    }
    return;
  }
  if (!blocked[v]) {
    std::vector<int> newly;
    for (int w = v + 1; w < n; ++w) {
      if (!blocked[w] && g.has_edge(v, w)) {
        blocked[w] = true;
        newly.push_back(w);
      }
    }
    current.push_back(v);
    mis_search(g, v + 1, current, blocked, best);
    current.pop_back();
    for (int w : newly) blocked[w] = false;
  }
  mis_search(g, v + 1, current, blocked, best);
}

}  // namespace

MisResult max_independent_set(const Graph& g) {
  if (g.n > 20) {
    throw SizeCap("independent set search capped at 20 vertices, got " +
                  std::to_string(g.n));
  }
  MisResult best;
  std::vector<int> current;
  std::vector<bool> blocked(g.n, false);
  mis_search(g, 0, current, blocked, best);
  return best;
}

namespace {

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> simplex_sample(std::mt19937_64& rng, int size) {
  std::vector<double> w(size);
  double sum = 0.0;
  for (double& x : w) {
    x = 0.05 + unit_double(rng);
    sum += x;
  }
  double partial = 0.0;
  for (int i = 0; i + 1 < size; ++i) {
    w[i] /= sum;
    partial += w[i];
  }
  w[size - 1] = 1.0 - partial;  // exact renormalization
  return w;
}

}  // namespace

Instance random_instance(std::uint64_t seed, int num_states, int num_types,
                         int num_actions, std::pair<double, double> range) {
  if (num_states < 1 || num_types < 1 || num_actions < 1) {
    throw BadParams("instance dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> states, types, actions;
  for (int s = 1; s <= num_states; ++s) {
    states.push_back("s" + std::to_string(s));
  }
  for (int t = 1; t <= num_types; ++t) {
    types.push_back("t" + std::to_string(t));
  }
  for (int a = 1; a <= num_actions; ++a) {
    actions.push_back("x" + std::to_string(a));
  }
  Instance inst = base_instance(std::move(states), std::move(types),
                                std::move(actions),
                                simplex_sample(rng, num_states),
                                simplex_sample(rng, num_types));
  const double lo = range.first, span = range.second - range.first;
  for (int t = 0; t < num_types; ++t) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        inst.agent_payoff[t][s][a] = lo + span * unit_double(rng);
      }
    }
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      inst.principal_payoff[s][a] = lo + span * unit_double(rng);
    }
  }
  return inst;
}

Graph graph_from_dimacs(std::istream& in) {
  Graph g;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      int n = 0, m = 0;
      if (!(ls >> kind >> n >> m) || n < 0) {
        throw BadParams("malformed DIMACS problem line");
      }
      g.n = n;
      have_header = true;
    } else if (tag == "e") {
      int u = 0, v = 0;
      if (!(ls >> u >> v)) throw BadParams("malformed DIMACS edge line");
      if (!have_header || u < 1 || v < 1 || u > g.n || v > g.n || u == v) {
        throw BadParams("DIMACS edge out of range");
      }
      g.edges.push_back({u - 1, v - 1});
    }
  }
  if (!have_header) throw BadParams("missing DIMACS problem line");
  return g;
}

}  // namespace persuasion
