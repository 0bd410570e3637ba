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

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "persuasion/errors.hpp"
#include "persuasion/lp.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace persuasion {

namespace {

std::string idx_name(const std::string& base, std::initializer_list<int> idx) {
  std::string s = base;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

double branch_value(const Instance& inst, const Policy& policy, int type) {
  double value = 0.0;
  for (int s = 0; s < inst.num_states(); ++s) {
    for (int a = 0; a < inst.num_actions(); ++a) {
      value += policy[s][a] * inst.u(type, s, a);
    }
  }
  return value;
}

std::vector<Policy> extract_policies(const Instance& inst,
                                     const std::vector<double>& x,
                                     int stride_base) {
  const int ns = inst.num_states(), na = inst.num_actions();
  std::vector<Policy> policies(inst.num_types());
  for (int t = 0; t < inst.num_types(); ++t) {
    policies[t].assign(ns, std::vector<double>(na, 0.0));
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        policies[t][s][a] = x[stride_base + (t * ns + s) * na + a];
      }
    }
  }
  return policies;
}

}  // namespace

LinearProgram noncredible_lp(const Instance& inst) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  LinearProgram lp;
  // pi[t][s][a] laid out first, then z[t][t'][a].
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_variable(idx_name("pi", {t, s, a}), 0.0, kInf);
      }
    }
  }
  const int z_base = lp.num_vars();
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      for (int a = 0; a < na; ++a) {
        lp.add_variable(idx_name("z", {t, t2, a}), -kInf, kInf);
      }
    }
  }
  auto pi = [&](int t, int s, int a) { return (t * ns + s) * na + a; };
  auto z = [&](int t, int t2, int a) { return z_base + (t * nt + t2) * na + a; };

  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_objective_term(pi(t, s, a), inst.type_dist[t] * inst.v(s, a));
      }
    }
  }
  // Truthful value of t dominates the best remapped deviation to any report.
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      std::vector<LinearProgram::Term> terms;
      for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
          terms.push_back({pi(t, s, a), inst.u(t, s, a)});
        }
      }
      for (int a = 0; a < na; ++a) terms.push_back({z(t, t2, a), -1.0});
      lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                        idx_name("dev", {t, t2}));
    }
  }
  // z(t,t',a) bounds every remapped play of recommendation a.
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      for (int a = 0; a < na; ++a) {
        for (int a2 = 0; a2 < na; ++a2) {
          std::vector<LinearProgram::Term> terms;
          terms.push_back({z(t, t2, a), 1.0});
          for (int s = 0; s < ns; ++s) {
            terms.push_back({pi(t2, s, a), -inst.u(t, s, a2)});
          }
          lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                            idx_name("zub", {t, t2, a, a2}));
        }
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      std::vector<LinearProgram::Term> terms;
      for (int a = 0; a < na; ++a) terms.push_back({pi(t, s, a), 1.0});
      lp.add_constraint(std::move(terms), LinearProgram::Rel::eq,
                        inst.prior[s], idx_name("marginal", {t, s}));
    }
  }
  return lp;
}

TwoStageSolution solve_noncredible(const Instance& inst) {
  TwoStageSolution out;
  out.report = solve_lp(noncredible_lp(inst));
  if (out.report.status == SolveStatus::optimal) {
    out.value = out.report.objective_value;
    out.policies = extract_policies(inst, out.report.assignment, 0);
  }
  return out;
}

LinearProgram credible_ic_lp(const Instance& inst) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  LinearProgram lp;
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_variable(idx_name("pi", {t, s, a}), 0.0, kInf);
      }
    }
  }
  auto pi = [&](int t, int s, int a) { return (t * ns + s) * na + a; };

  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_objective_term(pi(t, s, a), inst.type_dist[t] * inst.v(s, a));
      }
    }
  }
  // Report stage: truthful report dominates any other (the deviator follows
  // that branch's recommendations).
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      if (t2 == t) continue;
      std::vector<LinearProgram::Term> terms;
      for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
          terms.push_back({pi(t, s, a), inst.u(t, s, a)});
          terms.push_back({pi(t2, s, a), -inst.u(t, s, a)});
        }
      }
      lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                        idx_name("report_ic", {t, t2}));
    }
  }
  // Action stage: every recommendation is optimal for the reporting type.
  for (int t = 0; t < nt; ++t) {
    for (int a = 0; a < na; ++a) {
      for (int a2 = 0; a2 < na; ++a2) {
        if (a2 == a) continue;
        std::vector<LinearProgram::Term> terms;
        for (int s = 0; s < ns; ++s) {
          terms.push_back({pi(t, s, a), inst.u(t, s, a) - inst.u(t, s, a2)});
        }
        lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                          idx_name("action_ic", {t, a, a2}));
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      std::vector<LinearProgram::Term> terms;
      for (int a = 0; a < na; ++a) terms.push_back({pi(t, s, a), 1.0});
      lp.add_constraint(std::move(terms), LinearProgram::Rel::eq,
                        inst.prior[s], idx_name("marginal", {t, s}));
    }
  }
  return lp;
}

TwoStageSolution solve_credible_ic(const Instance& inst) {
  TwoStageSolution out;
  out.report = solve_lp(credible_ic_lp(inst));
  if (out.report.status == SolveStatus::optimal) {
    out.value = out.report.objective_value;
    out.policies = extract_policies(inst, out.report.assignment, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// The four-stage LP.

namespace {

struct EnsesIndex {
  int nt, ns, na;
  int pi_base, phi_base, uval_base, ubar_base;

  int pi(int i, int s, int j) const { return pi_base + (i * ns + s) * nt + j; }
  int phi(int i, int j, int k, int s, int a) const {
    return phi_base + ((((i * nt + j) * nt + k) * ns + s) * na) + a;
  }
  int uval(int i, int l, int j, int k) const {
    return uval_base + ((i * nt + l) * nt + j) * nt + k;
  }
  int ubar(int i, int l, int j) const {
    return ubar_base + (i * nt + l) * nt + j;
  }
};

EnsesIndex build_enses_lp(const Instance& inst, LinearProgram& lp) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  EnsesIndex ix{nt, ns, na, 0, 0, 0, 0};

  ix.pi_base = lp.num_vars();
  for (int i = 0; i < nt; ++i) {
    for (int s = 0; s < ns; ++s) {
      for (int j = 0; j < nt; ++j) {
        lp.add_variable(idx_name("pi", {i, s, j}), 0.0, kInf);
      }
    }
  }
  ix.phi_base = lp.num_vars();
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int s = 0; s < ns; ++s) {
          for (int a = 0; a < na; ++a) {
            lp.add_variable(idx_name("phi", {i, j, k, s, a}), 0.0, kInf);
          }
        }
      }
    }
  }
  ix.uval_base = lp.num_vars();
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nt; ++k) {
          lp.add_variable(idx_name("u", {i, l, j, k}), -kInf, kInf);
        }
      }
    }
  }
  ix.ubar_base = lp.num_vars();
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        lp.add_variable(idx_name("ubar", {i, l, j}), -kInf, kInf);
      }
    }
  }

  // Objective: each type follows its own branch, reports as recommended and
  // plays the recommended action.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
          lp.add_objective_term(
              ix.phi(i, j, j, s, a),
              inst.type_dist[i] * inst.prior[s] * inst.v(s, a));
        }
      }
    }
  }

  // Flow: the action-stage mass below report k equals the recommendation's.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int s = 0; s < ns; ++s) {
          std::vector<LinearProgram::Term> terms;
          for (int a = 0; a < na; ++a) {
            terms.push_back({ix.phi(i, j, k, s, a), 1.0});
          }
          terms.push_back({ix.pi(i, s, j), -1.0});
          lp.add_constraint(std::move(terms), LinearProgram::Rel::eq, 0.0,
                            idx_name("flow", {i, j, k, s}));
        }
      }
    }
  }
  // Each branch's recommendation kernel is a distribution per state.
  for (int i = 0; i < nt; ++i) {
    for (int s = 0; s < ns; ++s) {
      std::vector<LinearProgram::Term> terms;
      for (int j = 0; j < nt; ++j) terms.push_back({ix.pi(i, s, j), 1.0});
      lp.add_constraint(std::move(terms), LinearProgram::Rel::eq, 1.0,
                        idx_name("dist", {i, s}));
    }
  }
  // Action obedience for the reported (imitated) type.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int a = 0; a < na; ++a) {
          for (int b = 0; b < na; ++b) {
            if (b == a) continue;
            std::vector<LinearProgram::Term> terms;
            for (int s = 0; s < ns; ++s) {
              terms.push_back(
                  {ix.phi(i, j, k, s, a),
                   inst.prior[s] * (inst.u(k, s, a) - inst.u(k, s, b))});
            }
            lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                              idx_name("obey", {i, j, k, a, b}));
          }
        }
      }
    }
  }
  // Value variables: type i's payoff at the action-stage node of branch l.
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nt; ++k) {
          std::vector<LinearProgram::Term> terms;
          terms.push_back({ix.uval(i, l, j, k), 1.0});
          for (int s = 0; s < ns; ++s) {
            for (int a = 0; a < na; ++a) {
              terms.push_back({ix.phi(l, j, k, s, a),
                               -inst.prior[s] * inst.u(i, s, a)});
            }
          }
          lp.add_constraint(std::move(terms), LinearProgram::Rel::eq, 0.0,
                            idx_name("udef", {i, l, j, k}));
        }
      }
    }
  }
  // Report obedience within the own branch.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        if (k == j) continue;
        lp.add_constraint({{ix.uval(i, i, j, j), 1.0},
                           {ix.uval(i, i, j, k), -1.0}},
                          LinearProgram::Rel::ge, 0.0,
                          idx_name("report", {i, j, k}));
      }
    }
  }
  // Auxiliary upper bounds and the menu-stage IC.
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nt; ++k) {
          lp.add_constraint({{ix.ubar(i, l, j), 1.0},
                             {ix.uval(i, l, j, k), -1.0}},
                            LinearProgram::Rel::ge, 0.0,
                            idx_name("ubar", {i, l, j, k}));
        }
      }
    }
  }
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      if (l == i) continue;
      std::vector<LinearProgram::Term> terms;
      for (int j = 0; j < nt; ++j) {
        terms.push_back({ix.uval(i, i, j, j), 1.0});
        terms.push_back({ix.ubar(i, l, j), -1.0});
      }
      lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0,
                        idx_name("menu", {i, l}));
    }
  }
  return ix;
}

EnsesSolution unpack_enses(const Instance& inst, const EnsesIndex& ix,
                           const std::vector<double>& x, double objective) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  EnsesSolution sol;
  sol.objective_value = objective;
  sol.pi.assign(nt, std::vector<std::vector<double>>(
                        ns, std::vector<double>(nt, 0.0)));
  sol.phi.assign(
      nt, std::vector<std::vector<std::vector<std::vector<double>>>>(
              nt, std::vector<std::vector<std::vector<double>>>(
                      nt, std::vector<std::vector<double>>(
                              ns, std::vector<double>(na, 0.0)))));
  sol.node_values.assign(
      nt, std::vector<std::vector<std::vector<double>>>(
              nt, std::vector<std::vector<double>>(
                      nt, std::vector<double>(nt, 0.0))));
  sol.aux_upper.assign(nt, std::vector<std::vector<double>>(
                               nt, std::vector<double>(nt, 0.0)));
  for (int i = 0; i < nt; ++i) {
    for (int s = 0; s < ns; ++s) {
      for (int j = 0; j < nt; ++j) sol.pi[i][s][j] = x[ix.pi(i, s, j)];
    }
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int s = 0; s < ns; ++s) {
          for (int a = 0; a < na; ++a) {
            sol.phi[i][j][k][s][a] = x[ix.phi(i, j, k, s, a)];
          }
        }
      }
    }
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        sol.aux_upper[i][l][j] = x[ix.ubar(i, l, j)];
        for (int k = 0; k < nt; ++k) {
          sol.node_values[i][l][j][k] = x[ix.uval(i, l, j, k)];
        }
      }
    }
  }
  return sol;
}

}  // namespace

LinearProgram enses_lp(const Instance& inst) {
  LinearProgram lp;
  build_enses_lp(inst, lp);
  return lp;
}

EnsesResult solve_enses(const Instance& inst) {
  LinearProgram lp;
  const EnsesIndex ix = build_enses_lp(inst, lp);
  EnsesResult out;
  out.report = solve_lp(lp);
  if (out.report.status == SolveStatus::optimal) {
    out.value = out.report.objective_value;
    out.solution =
        unpack_enses(inst, ix, out.report.assignment, out.value);
  }
  return out;
}

EnsesSolution trivial_enses_solution(const Instance& inst) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  const Belief prior{inst.prior};
  // Principal-preferred prior-optimal action per type, matching the leaf
  // tie-break convention.
  std::vector<int> fixed(nt);
  for (int t = 0; t < nt; ++t) {
    const auto optimal = argmax_actions(inst, prior, t);
    int best = optimal.front();
    double best_v = expected_principal_payoff(inst, prior, best);
    for (int a : optimal) {
      const double v = expected_principal_payoff(inst, prior, a);
      if (v > best_v + kTieTol) {
        best = a;
        best_v = v;
      }
    }
    fixed[t] = best;
  }

  EnsesSolution sol;
  sol.pi.assign(nt, std::vector<std::vector<double>>(
                        ns, std::vector<double>(nt, 0.0)));
  sol.phi.assign(
      nt, std::vector<std::vector<std::vector<std::vector<double>>>>(
              nt, std::vector<std::vector<std::vector<double>>>(
                      nt, std::vector<std::vector<double>>(
                              ns, std::vector<double>(na, 0.0)))));
  sol.node_values.assign(
      nt, std::vector<std::vector<std::vector<double>>>(
              nt, std::vector<std::vector<double>>(
                      nt, std::vector<double>(nt, 0.0))));
  sol.aux_upper.assign(nt, std::vector<std::vector<double>>(
                               nt, std::vector<double>(nt, 0.0)));
  double objective = 0.0;
  for (int i = 0; i < nt; ++i) {
    for (int s = 0; s < ns; ++s) {
      sol.pi[i][s][i] = 1.0;
      for (int k = 0; k < nt; ++k) sol.phi[i][i][k][s][fixed[k]] = 1.0;
    }
    objective += inst.type_dist[i] *
                 expected_principal_payoff(inst, prior, fixed[i]);
  }
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int k = 0; k < nt; ++k) {
        sol.node_values[i][l][l][k] =
            expected_agent_payoff(inst, prior, i, fixed[k]);
      }
      for (int j = 0; j < nt; ++j) {
        double top = sol.node_values[i][l][j][0];
        for (int k = 1; k < nt; ++k) {
          top = std::max(top, sol.node_values[i][l][j][k]);
        }
        sol.aux_upper[i][l][j] = top;
      }
    }
  }
  sol.objective_value = objective;
  return sol;
}

ValidationReport check_enses_solution(const Instance& inst,
                                      const EnsesSolution& sol, double tol) {
  ValidationReport report;
  auto& out = report.violations;
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  auto near = [&](double x, double y) {
    return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x),
                                               std::fabs(y)});
  };
  for (int i = 0; i < nt; ++i) {
    for (int s = 0; s < ns; ++s) {
      double sum = 0.0;
      for (int j = 0; j < nt; ++j) {
        if (sol.pi[i][s][j] < -tol) out.push_back("pi has a negative entry");
        sum += sol.pi[i][s][j];
      }
      if (!near(sum, 1.0)) {
        std::ostringstream os;
        os << "pi[" << i << "][" << s << "] sums to " << sum;
        out.push_back(os.str());
      }
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nt; ++k) {
          double mass = 0.0;
          for (int a = 0; a < na; ++a) {
            if (sol.phi[i][j][k][s][a] < -tol) {
              out.push_back("phi has a negative entry");
            }
            mass += sol.phi[i][j][k][s][a];
          }
          if (!near(mass, sol.pi[i][s][j])) {
            std::ostringstream os;
            os << "flow violated at (" << i << "," << j << "," << k << ","
               << s << ")";
            out.push_back(os.str());
          }
        }
      }
    }
  }
  for (int i = 0; i < nt; ++i) {
    for (int l = 0; l < nt; ++l) {
      for (int j = 0; j < nt; ++j) {
        for (int k = 0; k < nt; ++k) {
          double value = 0.0;
          for (int s = 0; s < ns; ++s) {
            for (int a = 0; a < na; ++a) {
              value += inst.prior[s] * sol.phi[l][j][k][s][a] *
                       inst.u(i, s, a);
            }
          }
          if (!near(value, sol.node_values[i][l][j][k])) {
            std::ostringstream os;
            os << "node value mismatch at (" << i << "," << l << "," << j
               << "," << k << ")";
            out.push_back(os.str());
          }
          if (sol.aux_upper[i][l][j] < sol.node_values[i][l][j][k] - tol) {
            out.push_back("aux upper bound below a node value");
          }
        }
      }
    }
  }
  // Incentive layers.
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        if (sol.node_values[i][i][j][k] >
            sol.node_values[i][i][j][j] + tol) {
          out.push_back("report obedience violated");
        }
      }
    }
    for (int l = 0; l < nt; ++l) {
      if (l == i) continue;
      double own = 0.0, other = 0.0;
      for (int j = 0; j < nt; ++j) {
        own += sol.node_values[i][i][j][j];
        double top = sol.node_values[i][l][j][0];
        for (int k = 1; k < nt; ++k) {
          top = std::max(top, sol.node_values[i][l][j][k]);
        }
        other += top;
      }
      if (other > own + tol) out.push_back("menu stage IC violated");
    }
  }
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) {
      for (int k = 0; k < nt; ++k) {
        for (int a = 0; a < na; ++a) {
          for (int b = 0; b < na; ++b) {
            double gap = 0.0;
            for (int s = 0; s < ns; ++s) {
              gap += inst.prior[s] * sol.phi[i][j][k][s][a] *
                     (inst.u(k, s, a) - inst.u(k, s, b));
            }
            if (gap < -tol) {
              out.push_back("action obedience violated");
              b = na;
              a = na;
            }
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Exact two-stage optimum over imitation mappings.

namespace {

struct SigmaLpResult {
  bool feasible = false;
  double value = 0.0;
  std::vector<Policy> policies;
};

// Direct per-mapping LP: branch policies with per-branch obedience, report
// constraints binding each true type to its assigned branch.
SigmaLpResult solve_sigma_direct(const Instance& inst,
                                 const std::vector<int>& sigma,
                                 bool want_policies) {
  const int nt = inst.num_types(), ns = inst.num_states(),
            na = inst.num_actions();
  LinearProgram lp;
  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_variable(idx_name("pi", {t, s, a}), 0.0, kInf);
      }
    }
  }
  auto pi = [&](int t, int s, int a) { return (t * ns + s) * na + a; };

  for (int t = 0; t < nt; ++t) {
    for (int s = 0; s < ns; ++s) {
      for (int a = 0; a < na; ++a) {
        lp.add_objective_term(pi(sigma[t], s, a),
                              inst.type_dist[t] * inst.v(s, a));
      }
    }
  }
  for (int t2 = 0; t2 < nt; ++t2) {
    for (int s = 0; s < ns; ++s) {
      std::vector<LinearProgram::Term> terms;
      for (int a = 0; a < na; ++a) terms.push_back({pi(t2, s, a), 1.0});
      lp.add_constraint(std::move(terms), LinearProgram::Rel::eq,
                        inst.prior[s]);
    }
    for (int a = 0; a < na; ++a) {
      for (int b = 0; b < na; ++b) {
        if (b == a) continue;
        std::vector<LinearProgram::Term> terms;
        for (int s = 0; s < ns; ++s) {
          terms.push_back(
              {pi(t2, s, a), inst.u(t2, s, a) - inst.u(t2, s, b)});
        }
        lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0);
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      if (t2 == sigma[t]) continue;
      std::vector<LinearProgram::Term> terms;
      for (int s = 0; s < ns; ++s) {
        for (int a = 0; a < na; ++a) {
          terms.push_back({pi(sigma[t], s, a), inst.u(t, s, a)});
          terms.push_back({pi(t2, s, a), -inst.u(t, s, a)});
        }
      }
      lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0);
    }
  }

  const SolveReport report = solve_lp(lp);
  SigmaLpResult out;
  if (report.status != SolveStatus::optimal) return out;
  out.feasible = true;
  out.value = report.objective_value;
  if (want_policies) {
    out.policies = extract_policies(inst, report.assignment, 0);
  }
  return out;
}

// Two-state presolve: per (branch, recommended action) the obedience
// constraints confine the joint column to a planar cone with at most two
// extreme rays; reparameterizing by ray weights removes the whole obedience
// family from the LP.
struct ActionCone {
  bool empty = true;
  int num_rays = 0;
  double rays[2][2];
};

ActionCone action_cone(const Instance& inst, int branch_type, int action) {
  ActionCone cone;
  const double kAng = 1e-12;
  double lo = 0.0, hi = std::asin(1.0);  // [0, pi/2]
  for (int b = 0; b < inst.num_actions(); ++b) {
    if (b == action) continue;
    const double d1 = inst.u(branch_type, 0, action) -
                      inst.u(branch_type, 0, b);
    const double d2 = inst.u(branch_type, 1, action) -
                      inst.u(branch_type, 1, b);
    if (d1 >= 0 && d2 >= 0) continue;
    if (d1 <= 0 && d2 <= 0) return cone;  // only the origin
    if (d2 < 0) {
      hi = std::min(hi, std::atan2(d1, -d2));
    } else {
      lo = std::max(lo, std::atan2(-d1, d2));
    }
    if (lo > hi + kAng) return cone;
  }
  cone.empty = false;
  cone.rays[0][0] = std::cos(lo);
  cone.rays[0][1] = std::sin(lo);
  if (hi - lo <= kAng) {
    cone.num_rays = 1;
  } else {
    cone.num_rays = 2;
    cone.rays[1][0] = std::cos(hi);
    cone.rays[1][1] = std::sin(hi);
  }
  return cone;
}

SigmaLpResult solve_sigma_two_state(
    const Instance& inst, const std::vector<int>& sigma,
    const std::vector<std::vector<ActionCone>>& cones, bool want_policies) {
  const int nt = inst.num_types(), na = inst.num_actions();
  LinearProgram lp;
  // weight variable -> (branch, action, ray)
  std::vector<std::array<int, 3>> origin;
  std::vector<std::vector<std::array<int, 2>>> var_of(
      nt, std::vector<std::array<int, 2>>(na, {-1, -1}));
  for (int t2 = 0; t2 < nt; ++t2) {
    for (int a = 0; a < na; ++a) {
      const ActionCone& cone = cones[t2][a];
      if (cone.empty) continue;
      for (int r = 0; r < cone.num_rays; ++r) {
        var_of[t2][a][r] = lp.add_variable(idx_name("w", {t2, a, r}));
        origin.push_back({t2, a, r});
      }
    }
  }
  auto col = [&](int t2, int a, int r, int s) {
    return cones[t2][a].rays[r][s];
  };

  for (int v = 0; v < lp.num_vars(); ++v) {
    const auto& [t2, a, r] = origin[v];
    double coef = 0.0;
    for (int t = 0; t < nt; ++t) {
      if (sigma[t] != t2) continue;
      for (int s = 0; s < 2; ++s) {
        coef += inst.type_dist[t] * col(t2, a, r, s) * inst.v(s, a);
      }
    }
    lp.add_objective_term(v, coef);
  }
  for (int t2 = 0; t2 < nt; ++t2) {
    for (int s = 0; s < 2; ++s) {
      std::vector<LinearProgram::Term> terms;
      for (int a = 0; a < na; ++a) {
        for (int r = 0; r < cones[t2][a].num_rays; ++r) {
          terms.push_back({var_of[t2][a][r], col(t2, a, r, s)});
        }
      }
      lp.add_constraint(std::move(terms), LinearProgram::Rel::eq,
                        inst.prior[s]);
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int t2 = 0; t2 < nt; ++t2) {
      if (t2 == sigma[t]) continue;
      std::vector<LinearProgram::Term> terms;
      for (int a = 0; a < na; ++a) {
        for (int r = 0; r < cones[sigma[t]][a].num_rays; ++r) {
          double coef = 0.0;
          for (int s = 0; s < 2; ++s) {
            coef += col(sigma[t], a, r, s) * inst.u(t, s, a);
          }
          terms.push_back({var_of[sigma[t]][a][r], coef});
        }
        for (int r = 0; r < cones[t2][a].num_rays; ++r) {
          double coef = 0.0;
          for (int s = 0; s < 2; ++s) {
            coef -= col(t2, a, r, s) * inst.u(t, s, a);
          }
          terms.push_back({var_of[t2][a][r], coef});
        }
      }
      lp.add_constraint(std::move(terms), LinearProgram::Rel::ge, 0.0);
    }
  }

  const SolveReport report = solve_lp(lp);
  SigmaLpResult out;
  if (report.status != SolveStatus::optimal) return out;
  out.feasible = true;
  out.value = report.objective_value;
  if (want_policies) {
    out.policies.assign(nt, Policy(2, std::vector<double>(na, 0.0)));
    for (int v = 0; v < lp.num_vars(); ++v) {
      const auto& [t2, a, r] = origin[v];
      for (int s = 0; s < 2; ++s) {
        out.policies[t2][s][a] += report.assignment[v] * col(t2, a, r, s);
      }
    }
  }
  return out;
}

}  // namespace

EsBruteforceResult es_bruteforce(const Instance& inst,
                                 EsBruteforceOptions opts) {
  const int nt = inst.num_types();
  double count = 1.0;
  for (int t = 0; t < nt; ++t) count *= nt;
  if (count > static_cast<double>(opts.cap)) {
    throw ExplosionCap("imitation mapping count " + std::to_string(count) +
                       " exceeds cap " + std::to_string(opts.cap));
  }
  const long long total = static_cast<long long>(count);

  const bool two_state = inst.num_states() == 2 && !opts.force_general;
  std::vector<std::vector<ActionCone>> cones;
  if (two_state) {
    cones.assign(nt, std::vector<ActionCone>(inst.num_actions()));
    for (int t2 = 0; t2 < nt; ++t2) {
      for (int a = 0; a < inst.num_actions(); ++a) {
        cones[t2][a] = action_cone(inst, t2, a);
      }
    }
  }

  auto decode = [&](long long idx) {
    std::vector<int> sigma(nt);
    for (int t = nt - 1; t >= 0; --t) {
      sigma[t] = static_cast<int>(idx % nt);
      idx /= nt;
    }
    return sigma;  // lexicographic in the enumeration index
  };
  auto solve_one = [&](const std::vector<int>& sigma, bool want_policies) {
    return two_state ? solve_sigma_two_state(inst, sigma, cones, want_policies)
                     : solve_sigma_direct(inst, sigma, want_policies);
  };

  // Per-mapping values first (the sweep), one serial reduction after, so the
  // winner is independent of thread scheduling.
  std::vector<double> values(total,
                             -std::numeric_limits<double>::infinity());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (opts.parallel)
#endif
  for (long long idx = 0; idx < total; ++idx) {
    const SigmaLpResult result = solve_one(decode(idx), false);
    if (result.feasible) values[idx] = result.value;
  }
  (void)opts.parallel;

  long long best_idx = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (long long idx = 0; idx < total; ++idx) {
    if (values[idx] > best + 1e-12) {
      best = values[idx];
      best_idx = idx;
    }
  }
  if (best_idx < 0) {
    // Unreachable: the identity mapping is always feasible.
    throw Error("no feasible imitation mapping found");
  }
  EsBruteforceResult out;
  out.best.sigma = decode(best_idx);
  const SigmaLpResult winner = solve_one(out.best.sigma, true);
  out.value = winner.value;
  out.policies = winner.policies;
  return out;
}

// ---------------------------------------------------------------------------

bool deviation_constraints_hold(const Instance& inst,
                                const std::vector<Policy>& policies,
                                double tol) {
  const int nt = inst.num_types(), na = inst.num_actions();
  // Enumerate every remapping f: A -> A via an odometer.
  for (int t = 0; t < nt; ++t) {
    const double truthful = branch_value(inst, policies[t], t);
    for (int t2 = 0; t2 < nt; ++t2) {
      std::vector<int> f(na, 0);
      while (true) {
        double deviated = 0.0;
        for (int s = 0; s < inst.num_states(); ++s) {
          for (int a = 0; a < na; ++a) {
            deviated += policies[t2][s][a] * inst.u(t, s, f[a]);
          }
        }
        if (deviated > truthful + tol) return false;
        int pos = na - 1;
        while (pos >= 0 && f[pos] == na - 1) f[pos--] = 0;
        if (pos < 0) break;
        ++f[pos];
      }
    }
  }
  return true;
}

bool linearized_constraints_hold(const Instance& inst,
                                 const std::vector<Policy>& policies,
                                 double tol) {
  const int nt = inst.num_types(), na = inst.num_actions();
  // The tightest admissible auxiliary variables are the per-recommendation
  // maxima; the substituted constraint then decides feasibility.
  for (int t = 0; t < nt; ++t) {
    const double truthful = branch_value(inst, policies[t], t);
    for (int t2 = 0; t2 < nt; ++t2) {
      double bound = 0.0;
      for (int a = 0; a < na; ++a) {
        double z = -kInf;
        for (int a2 = 0; a2 < na; ++a2) {
          double value = 0.0;
          for (int s = 0; s < inst.num_states(); ++s) {
            value += policies[t2][s][a] * inst.u(t, s, a2);
          }
          z = std::max(z, value);
        }
        bound += z;
      }
      if (bound > truthful + tol) return false;
    }
  }
  return true;
}

double uninformative_baseline(const Instance& inst) {
  const Belief prior{inst.prior};
  double total = 0.0;
  for (int t = 0; t < inst.num_types(); ++t) {
    const auto optimal = argmax_actions(inst, prior, t);
    double best_v = -kInf;
    for (int a : optimal) {
      best_v = std::max(best_v, expected_principal_payoff(inst, prior, a));
    }
    total += inst.type_dist[t] * best_v;
  }
  return total;
}

}  // namespace persuasion
