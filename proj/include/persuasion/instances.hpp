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

#ifndef PERSUASION_INSTANCES_HPP
#define PERSUASION_INSTANCES_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/mechanism.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // unordered, no self-loops

  bool has_edge(int a, int b) const;
};

Graph make_complete(int n);
Graph make_cycle(int n);
Graph make_path(int n);
Graph make_star(int leaves);
Graph make_edgeless(int n);

// Parameters of the bundled examples. Zeros mean per-example defaults:
// big_m 10001 and delta 10/big_m for ex3, big_m 1e6 for ex5.
struct ExampleParams {
  double big_m = 0.0;
  double delta = 0.0;
  int n = 3;                // ex5 size
  std::vector<double> rho;  // ex1 type distribution override
};

// ex1 trade-for-information game, ex2 pre-signaling game, ex3 menu game,
// ex4 two-state partial-elicitation game, ex5 n-step chain game.
Instance example_instance(const std::string& id, ExampleParams params = {});

// ex1_trade, ex2_ses, ex3_fig2, ex4_pie, ex5_pie.
MechanismTree example_mechanism(const std::string& id,
                                ExampleParams params = {});

std::vector<std::string> example_instance_ids();
std::vector<std::string> example_mechanism_ids();

// The independent-set reduction gadget: one type per vertex plus a special
// type, two states, paired vertex actions plus two safe actions.
Instance reduce_mis(const Graph& g);

struct MisResult {
  int size = 0;
  std::vector<int> witness;
};

// Exact maximum independent set by branch-and-bound. Throws SizeCap for
// n > 20.
MisResult max_independent_set(const Graph& g);

// Deterministic fuzz instance: payoffs uniform in [range.first,
// range.second], prior and type distribution sampled from the simplex and
// renormalized exactly.
Instance random_instance(std::uint64_t seed, int num_states, int num_types,
                         int num_actions,
                         std::pair<double, double> range = {-1.0, 1.0});

Graph graph_from_dimacs(std::istream& in);

}  // namespace persuasion

#endif  // PERSUASION_INSTANCES_HPP
