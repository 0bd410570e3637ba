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

#ifndef PERSUASION_LP_HPP
#define PERSUASION_LP_HPP

#include <limits>
#include <string>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximization LP with named variables, bounds, and sparse rows.
struct LinearProgram {
  enum class Rel { le, eq, ge };
  struct Term {
    int var;
    double coef;
  };
  struct Constraint {
    std::vector<Term> terms;
    Rel rel;
    double rhs;
    std::string name;
  };

  std::vector<std::string> var_names;
  std::vector<double> lower, upper;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;

  int num_vars() const { return static_cast<int>(var_names.size()); }
  int add_variable(const std::string& name, double lo = 0.0,
                   double hi = kInf);
  void add_objective_term(int var, double coef);
  void add_constraint(std::vector<Term> terms, Rel rel, double rhs,
                      const std::string& name = "");
};

enum class SolveStatus { optimal, infeasible, unbounded, error };

std::string to_string(SolveStatus status);

struct SolveReport {
  SolveStatus status = SolveStatus::error;
  double objective_value = 0.0;
  std::vector<double> assignment;
  std::string solver_id;
  double tolerance = kLpFeasTol;
};

// Single entry point for LP solving. The backend is selected by the CP_SOLVER
// environment variable ("simplex" is the built-in default); failures are
// carried in the status, never thrown.
SolveReport solve_lp(const LinearProgram& lp);
SolveReport solve_lp_with(const LinearProgram& lp, const std::string& backend);

// Largest constraint/bound violation of an assignment.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

// CPLEX-LP text dump for cross-checking against external solvers.
std::string to_cplex_lp(const LinearProgram& lp);

// ---------------------------------------------------------------------------
// Optimal-mechanism formulations.

// Joint policy of one elicitation branch: policy[state][action] with
// sum_a policy[s][a] = prior[s].
using Policy = std::vector<std::vector<double>>;

struct TwoStageSolution {
  double value = 0.0;
  std::vector<Policy> policies;  // one per reported type
  SolveReport report;
};

// LP builders behind the solve_* entry points, exposed for text dumps and
// residual checks.
LinearProgram noncredible_lp(const Instance& inst);
LinearProgram credible_ic_lp(const Instance& inst);
LinearProgram enses_lp(const Instance& inst);

// Optimal mechanism against a non-credible agent: deviation constraints over
// every report/action remapping, linearized with one auxiliary variable per
// (type, reported type, recommendation).
TwoStageSolution solve_noncredible(const Instance& inst);

// Optimal IC two-stage mechanism against a credible agent: report-stage and
// action-stage incentive constraints imposed separately.
TwoStageSolution solve_credible_ic(const Instance& inst);

// Structured solution of the four-stage (menu, type recommendation, direct
// elicitation, action recommendation) LP.
struct EnsesSolution {
  // pi[i][state][j]: P(recommend reporting type j | state) in menu branch i.
  std::vector<std::vector<std::vector<double>>> pi;
  // phi[i][j][k][state][action]: joint mass of (recommendation j, report k,
  // action recommendation) per state in branch i.
  std::vector<std::vector<std::vector<std::vector<std::vector<double>>>>> phi;
  // node_values[i][l][j][k]: type-i value of the post-report signaling node
  // reached in branch l via recommendation j and report k (joint, weighted by
  // the recommendation's probability).
  std::vector<std::vector<std::vector<std::vector<double>>>> node_values;
  // aux_upper[i][l][j]: upper bound on max_k node_values[i][l][j][k].
  std::vector<std::vector<std::vector<double>>> aux_upper;
  double objective_value = 0.0;
};

struct EnsesResult {
  double value = 0.0;
  EnsesSolution solution;
  SolveReport report;
};

// Optimal indefinite-stage mechanism value via the four-stage LP. Always
// feasible (the truthful uninformative mechanism is a feasible point).
EnsesResult solve_enses(const Instance& inst);

// The truthful, uninformative feasible point: every branch recommends its own
// type and a fixed prior-optimal action of the reported type.
EnsesSolution trivial_enses_solution(const Instance& inst);

// Residual check of the EnsesSolution invariants (flow, distributions, value
// definitions, both DIC layers and menu IC).
ValidationReport check_enses_solution(const Instance& inst,
                                      const EnsesSolution& sol,
                                      double tol = kLpFeasTol);

// The type each true type imitates in a two-stage mechanism.
struct SigmaMapping {
  std::vector<int> sigma;
};

struct EsBruteforceOptions {
  long long cap = 1000000;    // max number of imitation mappings
  bool parallel = true;       // OpenMP sweep over mappings
  bool force_general = false; // skip the two-state cone reduction
};

struct EsBruteforceResult {
  double value = 0.0;
  SigmaMapping best;
  std::vector<Policy> policies;  // branch policies attaining the optimum
};

// Exact two-stage optimum by enumerating all |T|^|T| imitation mappings and
// solving one LP per mapping (a deviator to branch t'' follows that branch's
// recommendations). Ties on value resolve to the lexicographically smallest
// mapping. Throws ExplosionCap when |T|^|T| exceeds the cap.
EsBruteforceResult es_bruteforce(const Instance& inst,
                                 EsBruteforceOptions opts = {});

// Deviation constraint of the non-credible LP checked directly by enumerating
// every remapping f: A -> A, and via the linearization's constructed
// auxiliary variables. Used to certify their equivalence on sampled policies.
bool deviation_constraints_hold(const Instance& inst,
                                const std::vector<Policy>& policies,
                                double tol);
bool linearized_constraints_hold(const Instance& inst,
                                 const std::vector<Policy>& policies,
                                 double tol);

// Principal's payoff from the no-elicitation, uninformative benchmark: each
// type plays a prior-optimal action (principal-preferred among ties).
double uninformative_baseline(const Instance& inst);

}  // namespace persuasion

#endif  // PERSUASION_LP_HPP
