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

#include "persuasion/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "persuasion/agent.hpp"
#include "persuasion/errors.hpp"
#include "persuasion/instances.hpp"
#include "persuasion/json_io.hpp"
#include "persuasion/lp.hpp"
#include "persuasion/synthesis.hpp"

namespace persuasion::cli {

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kSolverFailure = 2;
constexpr int kBadUsage = 3;

struct SolverFailure : Error {
  using Error::Error;
};

struct ValidationFailure : Error {
  using Error::Error;
};

struct Config {
  double tolerance = kIcTol;
  double big_m = 0.0;
  double delta = 0.0;
  int n = 3;
  std::uint64_t seed = 1;
  long long cap = 0;  // 0: per-operation default
  std::string format = "json";
  std::string type_label;
  std::string instance_flag;
  std::string dump_lp;

  ExampleParams params() const {
    ExampleParams p;
    p.big_m = big_m;
    p.delta = delta;
    p.n = n;
    return p;
  }
  long long sigma_cap() const { return cap > 0 ? cap : 1000000; }
  long long profile_cap() const { return cap > 0 ? cap : 10000000; }
};

// All numeric output carries 12 significant digits.
double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

void round_numbers(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_array() || j.is_object()) {
    for (auto& item : j) round_numbers(item);
  }
}

void emit(const json& j, std::ostream& out) {
  json copy = j;
  round_numbers(copy);
  out << copy.dump(2) << "\n";
}

bool is_example_instance(const std::string& id) {
  const auto ids = example_instance_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool is_example_mechanism(const std::string& id) {
  const auto ids = example_mechanism_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

json read_json_source(const std::string& src, std::istream& in) {
  if (src == "-" || src.empty()) {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw BadParams(std::string("cannot parse stdin as JSON: ") + e.what());
    }
    return j;
  }
  std::ifstream file(src);
  if (!file) throw BadParams("cannot open file '" + src + "'");
  json j;
  try {
    file >> j;
  } catch (const json::exception& e) {
    throw BadParams("cannot parse '" + src + "' as JSON: " + e.what());
  }
  return j;
}

Instance load_instance(const std::string& src, const Config& cfg,
                       std::istream& in) {
  Instance inst;
  if (is_example_instance(src)) {
    inst = example_instance(src, cfg.params());
  } else {
    inst = instance_from_json(read_json_source(src, in));
  }
  const auto report = validate_instance(inst);
  if (!report.ok()) {
    throw ValidationFailure("invalid instance: " + report.violations.front());
  }
  return inst;
}

// Returns the mechanism plus, for example ids, the id of its instance.
std::string instance_id_for_mechanism(const std::string& mech_id) {
  return mech_id.substr(0, mech_id.find('_'));
}

MechanismTree load_mechanism(const std::string& src, const Instance& inst,
                             const Config& cfg, std::istream& in) {
  MechanismTree mech;
  if (is_example_mechanism(src)) {
    mech = example_mechanism(src, cfg.params());
  } else {
    mech = mechanism_from_json(read_json_source(src, in), inst);
  }
  const auto report = validate_mechanism(inst, mech);
  if (!report.ok()) {
    throw ValidationFailure("invalid mechanism: " +
                            report.violations.front());
  }
  return mech;
}

int resolve_type(const Instance& inst, const std::string& label) {
  const auto idx = inst.type_index(label);
  if (!idx) throw BadParams("unknown type label '" + label + "'");
  return *idx;
}

json solve_report_meta(const SolveReport& report) {
  return json{{"status", to_string(report.status)},
              {"solver", report.solver_id}};
}

void require_optimal(const SolveReport& report) {
  if (report.status != SolveStatus::optimal) {
    throw SolverFailure("solver returned " + to_string(report.status));
  }
}

void dump_lp_file(const std::string& path, const LinearProgram& lp) {
  std::ofstream file(path);
  if (!file) throw BadParams("cannot write LP dump to '" + path + "'");
  file << to_cplex_lp(lp);
}

int cmd_solve(const std::string& what, const std::string& src,
              const Config& cfg, std::istream& in, std::ostream& out) {
  const Instance inst = load_instance(src, cfg, in);
  if (!cfg.dump_lp.empty()) {
    if (what == "noncredible") dump_lp_file(cfg.dump_lp, noncredible_lp(inst));
    if (what == "ic") dump_lp_file(cfg.dump_lp, credible_ic_lp(inst));
    if (what == "enses") dump_lp_file(cfg.dump_lp, enses_lp(inst));
  }
  json j;
  if (what == "noncredible" || what == "ic") {
    const TwoStageSolution sol =
        what == "ic" ? solve_credible_ic(inst) : solve_noncredible(inst);
    require_optimal(sol.report);
    j["value"] = sol.value;
    j["policies"] = policies_to_json(sol.policies, inst);
    j["solve"] = solve_report_meta(sol.report);
  } else if (what == "enses") {
    const EnsesResult sol = solve_enses(inst);
    require_optimal(sol.report);
    j["value"] = sol.value;
    j["solution"] = enses_solution_to_json(sol.solution);
    j["solve"] = solve_report_meta(sol.report);
  } else if (what == "es-bruteforce") {
    EsBruteforceOptions opts;
    opts.cap = cfg.sigma_cap();
    const EsBruteforceResult sol = es_bruteforce(inst, opts);
    j["value"] = sol.value;
    json sigma = json::object();
    for (int t = 0; t < inst.num_types(); ++t) {
      sigma[inst.types[t]] = inst.types[sol.best.sigma[t]];
    }
    j["sigma"] = std::move(sigma);
    j["policies"] = policies_to_json(sol.policies, inst);
  } else {
    throw BadParams("unknown solve target '" + what + "'");
  }
  emit(j, out);
  return kOk;
}

int cmd_eval(const std::string& inst_src, const std::string& mech_src,
             const Config& cfg, std::istream& in, std::ostream& out) {
  const Instance inst = load_instance(inst_src, cfg, in);
  const MechanismTree mech = load_mechanism(mech_src, inst, cfg, in);
  const EvaluationReport report = evaluate(inst, mech);
  emit(evaluation_to_json(report, inst), out);
  return kOk;
}

int cmd_best_response(const std::string& inst_src, const std::string& mech_src,
                      const Config& cfg, std::istream& in, std::ostream& out) {
  if (cfg.type_label.empty()) throw BadParams("--type is required");
  const Instance inst = load_instance(inst_src, cfg, in);
  const MechanismTree mech = load_mechanism(mech_src, inst, cfg, in);
  const ResponseProfile profile =
      best_response(inst, mech, resolve_type(inst, cfg.type_label));
  emit(profile_to_json(profile, inst), out);
  return kOk;
}

Graph load_graph(const std::string& src, std::istream& in) {
  if (src != "-" && !src.empty()) {
    std::ifstream file(src);
    if (!file) throw BadParams("cannot open file '" + src + "'");
    std::string text((std::istreambuf_iterator<char>(file)),
                     std::istreambuf_iterator<char>());
    if (text.find("p ") != std::string::npos &&
        text.find('{') == std::string::npos) {
      std::istringstream is(text);
      return graph_from_dimacs(is);
    }
    return graph_from_json(json::parse(text));
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.find('{') == std::string::npos) {
    std::istringstream is(text);
    return graph_from_dimacs(is);
  }
  return graph_from_json(json::parse(text));
}

int cmd_reduce_mis(const std::string& src, std::istream& in,
                   std::ostream& out) {
  const Graph g = load_graph(src, in);
  emit(instance_to_json(reduce_mis(g)), out);
  return kOk;
}

int cmd_export(const std::string& mech_src, const Config& cfg,
               std::istream& in, std::ostream& out) {
  std::string inst_src = cfg.instance_flag;
  if (inst_src.empty() && is_example_mechanism(mech_src)) {
    inst_src = instance_id_for_mechanism(mech_src);
  }
  if (inst_src.empty()) {
    throw BadParams("export needs --instance to resolve labels");
  }
  const Instance inst = load_instance(inst_src, cfg, in);
  const MechanismTree mech = load_mechanism(mech_src, inst, cfg, in);
  if (cfg.format == "dot") {
    out << to_dot(mech, inst);
  } else if (cfg.format == "json") {
    emit(mechanism_to_json(mech, inst), out);
  } else {
    throw BadParams("unknown export format '" + cfg.format + "'");
  }
  return kOk;
}

int cmd_random_instance(int states, int types, int actions, double lo,
                        double hi, const Config& cfg, std::ostream& out) {
  emit(instance_to_json(
           random_instance(cfg.seed, states, types, actions, {lo, hi})),
       out);
  return kOk;
}

// ---------------------------------------------------------------------------
// verify: the single entry point that re-runs the invariant battery.

struct CheckList {
  json checks = json::array();
  bool all_ok = true;

  void add(const std::string& name, bool ok, const std::string& detail = "") {
    checks.push_back(json{{"check", name}, {"ok", ok}, {"detail", detail}});
    all_ok = all_ok && ok;
  }
  void skip(const std::string& name, const std::string& why) {
    checks.push_back(json{{"check", name}, {"ok", true}, {"skipped", why}});
  }
};

void verify_mechanism(const Instance& inst, const MechanismTree& mech,
                      const Config& cfg, CheckList& list) {
  const auto report = validate_mechanism(inst, mech);
  list.add("mechanism_valid", report.ok(),
           report.ok() ? "" : report.violations.front());
  if (!report.ok()) return;

  const EvaluationReport eval_report = evaluate(inst, mech);
  list.add("evaluate", true,
           "principal value " + std::to_string(eval_report.principal_value));

  // Credibility of every leaf choice in every profile.
  bool credible = true;
  for (const auto& outcome : eval_report.per_type) {
    for (const auto& [path, choice] : outcome.profile.leaf_choices) {
      const Belief& belief = outcome.profile.beliefs.at(path);
      const auto optimal =
          argmax_actions(inst, belief, choice.imitated_type);
      if (std::find(optimal.begin(), optimal.end(), choice.action) ==
          optimal.end()) {
        credible = false;
      }
    }
  }
  list.add("profiles_credible", credible);

  // Oracle equivalence, when the enumeration fits the cap.
  bool oracle_ok = true;
  bool capped = false;
  for (int t = 0; t < inst.num_types() && !capped; ++t) {
    try {
      const double exact =
          brute_force_response(inst, mech, t, cfg.profile_cap());
      const double brv = best_response(inst, mech, t).agent_value;
      if (std::fabs(exact - brv) > 1e-9) oracle_ok = false;
    } catch (const ExplosionCap&) {
      capped = true;
    }
  }
  if (capped) {
    list.skip("oracle_equivalence", "profile count over cap");
  } else {
    list.add("oracle_equivalence", oracle_ok);
  }

  try {
    const MultistageIcReport ic = check_multistage_ic(inst, mech);
    list.add("multistage_ic", ic.ok(),
             ic.ok() ? "" : ic.violations.front());
  } catch (const ShapeMismatch&) {
    list.skip("multistage_ic", "not a four-stage tree");
  }
}

void verify_solution(const Instance& inst, const EnsesSolution& sol,
                     CheckList& list) {
  const auto residuals = check_enses_solution(inst, sol);
  list.add("solution_residuals", residuals.ok(),
           residuals.ok() ? "" : residuals.violations.front());
  if (!residuals.ok()) return;
  const MechanismTree tree = enses_tree(inst, sol);
  const EvaluationReport eval_report = evaluate(inst, tree);
  const bool match =
      std::fabs(eval_report.principal_value - sol.objective_value) <= kIcTol;
  list.add("synthesis_round_trip", match,
           "tree value " + std::to_string(eval_report.principal_value));
  const MultistageIcReport ic = check_multistage_ic(inst, tree);
  list.add("multistage_ic", ic.ok(), ic.ok() ? "" : ic.violations.front());
}

void verify_dominance(const Instance& inst, const Config& cfg,
                      CheckList& list) {
  const int nt = inst.num_types();
  double sigma_count = 1.0;
  for (int t = 0; t < nt; ++t) sigma_count *= nt;
  const double enses_vars = std::pow(nt, 3.0) * inst.num_states() *
                            inst.num_actions();
  if (sigma_count > static_cast<double>(cfg.sigma_cap()) ||
      enses_vars > 20000.0) {
    list.skip("dominance_chain", "instance over cap for exact solves");
    return;
  }
  const TwoStageSolution ic = solve_credible_ic(inst);
  const EnsesResult enses = solve_enses(inst);
  if (ic.report.status != SolveStatus::optimal ||
      enses.report.status != SolveStatus::optimal) {
    list.add("dominance_chain", false, "solver failure");
    return;
  }
  EsBruteforceOptions opts;
  opts.cap = cfg.sigma_cap();
  const EsBruteforceResult es = es_bruteforce(inst, opts);
  const bool chain = enses.value >= es.value - kIcTol &&
                     es.value >= ic.value - kIcTol;
  std::ostringstream detail;
  detail << "enses " << enses.value << " >= es " << es.value << " >= ic "
         << ic.value;
  list.add("dominance_chain", chain, detail.str());
  const double baseline = uninformative_baseline(inst);
  list.add("baseline_bound", enses.value >= baseline - kIcTol &&
                                 ic.value >= baseline - kIcTol);
  const auto residuals = check_enses_solution(inst, enses.solution);
  list.add("lp_residuals", residuals.ok(),
           residuals.ok() ? "" : residuals.violations.front());
}

int cmd_verify(const std::string& inst_src, const std::string& extra_src,
               const Config& cfg, std::istream& in, std::ostream& out) {
  CheckList list;
  Instance inst;
  try {
    inst = load_instance(inst_src, cfg, in);
    list.add("instance_valid", true);
  } catch (const ValidationFailure& e) {
    list.add("instance_valid", false, e.what());
    json j{{"ok", false}, {"checks", list.checks}};
    emit(j, out);
    return kValidationFailure;
  }

  if (!extra_src.empty()) {
    if (is_example_mechanism(extra_src)) {
      verify_mechanism(inst, example_mechanism(extra_src, cfg.params()), cfg,
                       list);
    } else {
      const json j = read_json_source(extra_src, in);
      const bool is_solution = j.contains("pi") && j.contains("phi");
      if (is_solution) {
        verify_solution(inst, enses_solution_from_json(j), list);
      } else {
        verify_mechanism(inst, mechanism_from_json(j, inst), cfg, list);
      }
    }
  }
  verify_dominance(inst, cfg, list);

  json j{{"ok", list.all_ok}, {"checks", list.checks}};
  emit(j, out);
  return list.all_ok ? kOk : kValidationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Solver and simulator for multi-stage persuasion mechanisms "
               "against credible private types"};
  app.require_subcommand(1);
  app.fallthrough(true);
  Config cfg;
  app.add_option("--tolerance", cfg.tolerance, "incentive check tolerance");
  app.add_option("--big-m", cfg.big_m, "penalty constant for examples");
  app.add_option("--delta", cfg.delta, "mixing weight for ex3");
  app.add_option("--n", cfg.n, "size parameter for ex5");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--cap", cfg.cap, "enumeration cap");

  std::string example_kind, example_id;
  auto* example = app.add_subcommand("example", "emit a bundled example");
  example->add_option("kind", example_kind, "instance or mechanism")
      ->required();
  example->add_option("id", example_id, "example id")->required();

  std::string solve_what, solve_src = "-";
  auto* solve = app.add_subcommand("solve", "solve for an optimal mechanism");
  solve->add_option("what", solve_what,
                    "noncredible | ic | enses | es-bruteforce")
      ->required();
  solve->add_option("instance", solve_src, "instance file, id, or -");
  solve->add_option("--dump-lp", cfg.dump_lp, "write the LP in CPLEX format");

  std::string eval_a = "-", eval_b;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a mechanism");
  eval_cmd->add_option("first", eval_a, "instance (or mechanism with "
                                        "--instance)");
  eval_cmd->add_option("second", eval_b, "mechanism file, id, or -");
  eval_cmd->add_option("--instance", cfg.instance_flag, "instance source");

  std::string br_a = "-", br_b;
  auto* br = app.add_subcommand("best-response", "best response of one type");
  br->add_option("first", br_a, "instance (or mechanism with --instance)");
  br->add_option("second", br_b, "mechanism file, id, or -");
  br->add_option("--instance", cfg.instance_flag, "instance source");
  br->add_option("--type", cfg.type_label, "type label")->required();

  std::string graph_src = "-";
  auto* reduce = app.add_subcommand("reduce-mis",
                                    "independent-set reduction gadget");
  reduce->add_option("graph", graph_src, "graph JSON/DIMACS file or -");

  std::string export_src = "-";
  auto* exporter = app.add_subcommand("export", "export a mechanism");
  exporter->add_option("mechanism", export_src, "mechanism file, id, or -");
  exporter->add_option("--instance", cfg.instance_flag, "instance source");
  exporter->add_option("--format", cfg.format, "dot | json");

  std::string verify_inst = "-", verify_extra;
  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  verify->add_option("instance", verify_inst, "instance file, id, or -");
  verify->add_option("subject", verify_extra,
                     "mechanism or solution file, id, or -");

  int rnd_states = 2, rnd_types = 2, rnd_actions = 2;
  double rnd_lo = -1.0, rnd_hi = 1.0;
  auto* random = app.add_subcommand("random-instance",
                                    "deterministic fuzz instance");
  random->add_option("--states", rnd_states, "state count");
  random->add_option("--types", rnd_types, "type count");
  random->add_option("--actions", rnd_actions, "action count");
  random->add_option("--lo", rnd_lo, "payoff range lower end");
  random->add_option("--hi", rnd_hi, "payoff range upper end");

  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) {
         return true;
       })) {
    sub->fallthrough(true);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kBadUsage;
  }

  try {
    if (*example) {
      if (example_kind == "instance") {
        emit(instance_to_json(example_instance(example_id, cfg.params())),
             out);
      } else if (example_kind == "mechanism") {
        const std::string inst_id = instance_id_for_mechanism(example_id);
        const Instance inst = example_instance(inst_id, cfg.params());
        emit(mechanism_to_json(example_mechanism(example_id, cfg.params()),
                               inst),
             out);
      } else {
        throw BadParams("example kind must be 'instance' or 'mechanism'");
      }
      return kOk;
    }
    if (*solve) return cmd_solve(solve_what, solve_src, cfg, in, out);
    if (*eval_cmd) {
      if (!cfg.instance_flag.empty()) {
        return cmd_eval(cfg.instance_flag, eval_a, cfg, in, out);
      }
      if (eval_b.empty()) throw BadParams("eval needs instance and mechanism");
      return cmd_eval(eval_a, eval_b, cfg, in, out);
    }
    if (*br) {
      if (!cfg.instance_flag.empty()) {
        return cmd_best_response(cfg.instance_flag, br_a, cfg, in, out);
      }
      if (br_b.empty()) {
        throw BadParams("best-response needs instance and mechanism");
      }
      return cmd_best_response(br_a, br_b, cfg, in, out);
    }
    if (*reduce) return cmd_reduce_mis(graph_src, in, out);
    if (*exporter) return cmd_export(export_src, cfg, in, out);
    if (*verify) return cmd_verify(verify_inst, verify_extra, cfg, in, out);
    if (*random) {
      return cmd_random_instance(rnd_states, rnd_types, rnd_actions, rnd_lo,
                                 rnd_hi, cfg, out);
    }
  } catch (const BadParams& e) {
    err << "error: " << e.what() << "\n";
    return kBadUsage;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const ExplosionCap& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const SizeCap& e) {
    err << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadUsage;
  }
  return kBadUsage;
}

}  // namespace persuasion::cli
