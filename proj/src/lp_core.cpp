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
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <utility>

#include "persuasion/lp.hpp"

namespace persuasion {

int LinearProgram::add_variable(const std::string& name, double lo,
                                double hi) {
  var_names.push_back(name);
  lower.push_back(lo);
  upper.push_back(hi);
  return num_vars() - 1;
}

void LinearProgram::add_objective_term(int var, double coef) {
  if (coef != 0.0) objective.push_back({var, coef});
}

void LinearProgram::add_constraint(std::vector<Term> terms, Rel rel,
                                   double rhs, const std::string& name) {
  constraints.push_back({std::move(terms), rel, rhs, name});
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::error: return "error";
  }
  return "error";
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (std::isfinite(lp.lower[j])) worst = std::max(worst, lp.lower[j] - x[j]);
    if (std::isfinite(lp.upper[j])) worst = std::max(worst, x[j] - lp.upper[j]);
  }
  for (const auto& c : lp.constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.rel) {
      case LinearProgram::Rel::le: worst = std::max(worst, lhs - c.rhs); break;
      case LinearProgram::Rel::ge: worst = std::max(worst, c.rhs - lhs); break;
      case LinearProgram::Rel::eq:
        worst = std::max(worst, std::fabs(lhs - c.rhs));
        break;
    }
  }
  return worst;
}

namespace {

constexpr double kSimplexEps = 1e-9;

// Dense simplex over max c.y, A y <= b, y >= 0, with an auxiliary column for
// infeasible starts and (value, index) pair comparisons at every pivot
// choice. The formulations in this project are heavily degenerate (stacks of
// zero right-hand sides with symmetric branches), which plain tie-breaking
// does not always escape; ratio tests therefore run against a perturbed
// right-hand side (distinct offsets per row) while the exact one is pivoted
// alongside in a second column and used for the answer.
class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> a, std::vector<double> b,
          std::vector<double> c)
      : m_(static_cast<int>(b.size())),
        n_(static_cast<int>(c.size())),
        pert_(n_ + 1),
        exact_(n_ + 2),
        nonbasic_(n_ + 1),
        basic_(m_),
        d_(m_ + 2, std::vector<double>(n_ + 3, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) d_[i][j] = a[i][j];
      basic_[i] = n_ + i;
      d_[i][n_] = -1.0;
      d_[i][pert_] = b[i] + 1e-7 * (i + 1.0) / (m_ + 1.0);
      d_[i][exact_] = b[i];
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      d_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    d_[m_ + 1][n_] = 1.0;
  }

  // Returns the objective; infeasible and unbounded outcomes are flagged.
  double solve(std::vector<double>& x) {
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (d_[i][pert_] < d_[r][pert_]) r = i;
    }
    if (m_ > 0 && d_[r][pert_] < -kSimplexEps) {
      pivot(r, n_);
      if (!iterate(2) || d_[m_ + 1][pert_] < -1e-6) {
        infeasible_ = true;
        return 0.0;
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n_; ++j) {
          if (pair_less(d_[i][j], nonbasic_[j], d_[i][s], nonbasic_[s])) {
            s = j;
          }
        }
        pivot(i, s);
      }
    }
    if (!iterate(1)) {
      unbounded_ = true;
      return 0.0;
    }
    x.assign(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) x[basic_[i]] = d_[i][exact_];
    }
    return d_[m_][exact_];
  }

  bool infeasible() const { return infeasible_; }
  bool unbounded() const { return unbounded_; }
  bool exhausted() const { return exhausted_; }

 private:
  static bool pair_less(double a_value, int a_index, double b_value,
                        int b_index) {
    if (a_value != b_value) return a_value < b_value;
    return a_index < b_index;
  }

  void pivot(int r, int s) {
    double* a = d_[r].data();
    const double inv = 1.0 / a[s];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(d_[i][s]) <= kSimplexEps) continue;
      double* row = d_[i].data();
      const double factor = row[s] * inv;
      for (int j = 0; j <= n_ + 2; ++j) row[j] -= a[j] * factor;
      row[s] = a[s] * factor;
    }
    for (int j = 0; j <= n_ + 2; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) d_[i][s] *= -inv;
    }
    d_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  bool iterate(int phase) {
    const int x = m_ + phase - 1;
    for (long long iter = 0;; ++iter) {
      if (iter > 2000000) {
        exhausted_ = true;
        return false;
      }
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (s == -1 ||
            pair_less(d_[x][j], nonbasic_[j], d_[x][s], nonbasic_[s])) {
          s = j;
        }
      }
      if (s == -1 || d_[x][s] >= -kSimplexEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (d_[i][s] <= kSimplexEps) continue;
        if (r == -1 ||
            pair_less(d_[i][pert_] / d_[i][s], basic_[i],
                      d_[r][pert_] / d_[r][s], basic_[r])) {
          r = i;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  int pert_, exact_;
  std::vector<int> nonbasic_, basic_;
  std::vector<std::vector<double>> d_;
  bool infeasible_ = false;
  bool unbounded_ = false;
  bool exhausted_ = false;
};

// Bound and relation presolve around the tableau: lower bounds are shifted
// out, mirrored or split variables handle one-sided and free cases, upper
// bounds and equalities become inequality rows, every row is scaled to unit
// max-abs coefficient.
class DenseSimplex {
 public:
  explicit DenseSimplex(const LinearProgram& lp) : lp_(lp) {}

  SolveReport solve() {
    SolveReport report;
    report.solver_id = "simplex";
    report.tolerance = kLpFeasTol;
    build();
    if (infeasible_bounds_) {
      report.status = SolveStatus::infeasible;
      return report;
    }
    std::vector<double> y;
    Tableau tableau(std::move(rows_), std::move(rhs_), std::move(costs_));
    tableau.solve(y);
    if (tableau.exhausted()) {
      report.status = SolveStatus::error;
      return report;
    }
    if (tableau.infeasible()) {
      report.status = SolveStatus::infeasible;
      return report;
    }
    if (tableau.unbounded()) {
      report.status = SolveStatus::unbounded;
      return report;
    }
    report.status = SolveStatus::optimal;
    report.assignment.assign(lp_.num_vars(), 0.0);
    for (int j = 0; j < lp_.num_vars(); ++j) {
      const auto& [c1, c2] = col_of_var_[j];
      double value = shift_[j] + scale_[c1] * col_scale_[c1] * y[c1];
      if (c2 >= 0) value += scale_[c2] * col_scale_[c2] * y[c2];
      report.assignment[j] = value;
    }
    double obj = 0.0;
    for (const auto& t : lp_.objective) {
      obj += t.coef * report.assignment[t.var];
    }
    report.objective_value = obj;
    return report;
  }

 private:
  void add_le_row(std::vector<double> coefs, double rhs) {
    double maxabs = 0.0;
    for (double c : coefs) maxabs = std::max(maxabs, std::fabs(c));
    if (maxabs < kSimplexEps) {
      if (rhs < -kLpFeasTol) infeasible_bounds_ = true;
      return;
    }
    rows_.push_back(std::move(coefs));
    rhs_.push_back(rhs);
  }

  // Alternating row/column geometric scaling with power-of-two factors;
  // big-M instances otherwise mix magnitudes badly enough to stall the
  // pivoting.
  void equilibrate() {
    const int rows = static_cast<int>(rows_.size());
    const int cols = static_cast<int>(col_scale_.size());
    auto pow2_inverse = [](double m) {
      return std::exp2(-std::round(std::log2(m)));
    };
    for (int pass = 0; pass < 3; ++pass) {
      for (int j = 0; j < cols; ++j) {
        double m = 0.0;
        for (int i = 0; i < rows; ++i) m = std::max(m, std::fabs(rows_[i][j]));
        if (m <= 0.0) continue;
        const double s = pow2_inverse(m);
        if (s == 1.0) continue;
        for (int i = 0; i < rows; ++i) rows_[i][j] *= s;
        costs_[j] *= s;
        col_scale_[j] *= s;
      }
      for (int i = 0; i < rows; ++i) {
        double m = 0.0;
        for (double c : rows_[i]) m = std::max(m, std::fabs(c));
        if (m <= 0.0) continue;
        const double s = pow2_inverse(m);
        if (s == 1.0) continue;
        for (double& c : rows_[i]) c *= s;
        rhs_[i] *= s;
      }
    }
  }

  void add_row(const std::vector<double>& coefs, LinearProgram::Rel rel,
               double rhs) {
    if (rel != LinearProgram::Rel::ge) add_le_row(coefs, rhs);
    if (rel != LinearProgram::Rel::le) {
      std::vector<double> negated(coefs.size());
      for (size_t j = 0; j < coefs.size(); ++j) negated[j] = -coefs[j];
      add_le_row(std::move(negated), -rhs);
    }
  }

  void build() {
    const int n = lp_.num_vars();
    col_of_var_.assign(n, {-1, -1});
    shift_.assign(n, 0.0);
    std::vector<std::pair<int, double>> upper_rows;
    for (int j = 0; j < n; ++j) {
      const double lo = lp_.lower[j];
      const double hi = lp_.upper[j];
      if (std::isfinite(lo)) {
        shift_[j] = lo;
        col_of_var_[j].first = static_cast<int>(scale_.size());
        scale_.push_back(1.0);
        if (std::isfinite(hi)) {
          if (hi < lo - kLpFeasTol) infeasible_bounds_ = true;
          upper_rows.push_back({j, hi - lo});
        }
      } else if (std::isfinite(hi)) {
        shift_[j] = hi;  // x = hi - y
        col_of_var_[j].first = static_cast<int>(scale_.size());
        scale_.push_back(-1.0);
      } else {
        col_of_var_[j].first = static_cast<int>(scale_.size());
        scale_.push_back(1.0);
        col_of_var_[j].second = static_cast<int>(scale_.size());
        scale_.push_back(-1.0);
      }
    }
    const int cols = static_cast<int>(scale_.size());

    costs_.assign(cols, 0.0);
    for (const auto& t : lp_.objective) {
      const auto& [c1, c2] = col_of_var_[t.var];
      costs_[c1] += t.coef * scale_[c1];
      if (c2 >= 0) costs_[c2] += t.coef * scale_[c2];
    }

    for (const auto& c : lp_.constraints) {
      std::vector<double> coefs(cols, 0.0);
      double rhs = c.rhs;
      for (const auto& t : c.terms) {
        rhs -= t.coef * shift_[t.var];
        const auto& [c1, c2] = col_of_var_[t.var];
        coefs[c1] += t.coef * scale_[c1];
        if (c2 >= 0) coefs[c2] += t.coef * scale_[c2];
      }
      add_row(coefs, c.rel, rhs);
    }
    for (const auto& [var, bound] : upper_rows) {
      std::vector<double> coefs(cols, 0.0);
      coefs[col_of_var_[var].first] = 1.0;
      add_le_row(std::move(coefs), bound);
    }
    col_scale_.assign(cols, 1.0);
    equilibrate();
  }

  const LinearProgram& lp_;
  std::vector<std::pair<int, int>> col_of_var_;
  std::vector<double> shift_;
  std::vector<double> scale_;
  std::vector<double> col_scale_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<double> costs_;
  bool infeasible_bounds_ = false;
};

}  // namespace

SolveReport solve_lp_with(const LinearProgram& lp, const std::string& backend) {
  if (backend.empty() || backend == "simplex" || backend == "dense-simplex") {
    return DenseSimplex(lp).solve();
  }
  SolveReport report;
  report.status = SolveStatus::error;
  report.solver_id = backend;
  return report;
}

SolveReport solve_lp(const LinearProgram& lp) {
  const char* env = std::getenv("CP_SOLVER");
  return solve_lp_with(lp, env ? env : "simplex");
}

std::string to_cplex_lp(const LinearProgram& lp) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "Maximize\n obj:";
  for (const auto& t : lp.objective) {
    os << (t.coef >= 0 ? " + " : " - ") << std::fabs(t.coef) << " "
       << lp.var_names[t.var];
  }
  os << "\nSubject To\n";
  int idx = 0;
  for (const auto& c : lp.constraints) {
    os << " " << (c.name.empty() ? "c" + std::to_string(idx) : c.name) << ":";
    for (const auto& t : c.terms) {
      os << (t.coef >= 0 ? " + " : " - ") << std::fabs(t.coef) << " "
         << lp.var_names[t.var];
    }
    switch (c.rel) {
      case LinearProgram::Rel::le: os << " <= "; break;
      case LinearProgram::Rel::eq: os << " = "; break;
      case LinearProgram::Rel::ge: os << " >= "; break;
    }
    os << c.rhs << "\n";
    ++idx;
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      os << " " << lp.var_names[j] << " free\n";
    } else if (!std::isfinite(hi)) {
      if (lo != 0.0) os << " " << lp.var_names[j] << " >= " << lo << "\n";
    } else if (!std::isfinite(lo)) {
      os << " -inf <= " << lp.var_names[j] << " <= " << hi << "\n";
    } else {
      os << " " << lo << " <= " << lp.var_names[j] << " <= " << hi << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace persuasion
