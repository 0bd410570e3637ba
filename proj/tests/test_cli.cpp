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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "persuasion/cli.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(const std::vector<std::string>& args,
                 const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = persuasion::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("example instance emits parseable JSON") {
  const CliResult r = invoke({"example", "instance", "ex1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["states"].size() == 2);
  CHECK(j["actions"].size() == 4);
}

TEST_CASE("piped instance into the IC solver") {
  const CliResult produced = invoke({"example", "instance", "ex1"});
  REQUIRE(produced.code == 0);
  const CliResult solved = invoke({"solve", "ic"}, produced.out);
  REQUIRE(solved.code == 0);
  const json j = json::parse(solved.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("piped mechanism into eval with an instance id") {
  const CliResult produced = invoke({"example", "mechanism", "ex4_pie"});
  REQUIRE(produced.code == 0);
  const CliResult eval =
      invoke({"eval", "--instance", "ex4"}, produced.out);
  REQUIRE(eval.code == 0);
  const json j = json::parse(eval.out);
  CHECK(j["principal_value"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("eval accepts two example ids directly") {
  const CliResult r = invoke({"eval", "ex2", "ex2_ses"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["principal_value"].get<double>() ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("best-response reports the imitation plan") {
  const CliResult r =
      invoke({"best-response", "ex1", "ex1_trade", "--type", "t1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["agent_value"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("missing files exit with the usage code") {
  const CliResult r = invoke({"solve", "ic", "missing_file.json"});
  CHECK(r.code == 3);
  CHECK(r.err.find("missing_file.json") != std::string::npos);
}

TEST_CASE("malformed instances exit with the validation code") {
  const CliResult r = invoke(
      {"solve", "ic", "-"},
      R"({"states":["s"],"types":["t"],"actions":["a"],"prior":[0.5],
          "type_dist":[1.0],"agent_payoff":[[[1.0]]],
          "principal_payoff":[[1.0]]})");
  CHECK(r.code == 1);
}

TEST_CASE("solve enses on ex4 finds the non-PIE ceiling") {
  const CliResult r = invoke({"solve", "enses", "ex4"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::fabs(j["value"].get<double>()) <= 1e-6);
  CHECK(j["solution"].contains("pi"));
}

TEST_CASE("es-bruteforce reports the winning imitation mapping") {
  const CliResult r = invoke({"solve", "es-bruteforce", "ex1"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(j["sigma"]["t1"] == "t2");
  CHECK(j["sigma"]["t2"] == "t2");
}

TEST_CASE("reduce-mis consumes graph JSON") {
  const CliResult r =
      invoke({"reduce-mis", "-"}, R"({"n":3,"edges":[[0,1],[1,2],[0,2]]})");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["types"].size() == 4);
  CHECK(j["actions"].size() == 8);
}

TEST_CASE("reduce-mis consumes DIMACS") {
  const CliResult r = invoke({"reduce-mis", "-"},
                             "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["types"].size() == 4);
}

TEST_CASE("dot export of an example mechanism") {
  const CliResult r =
      invoke({"export", "ex3_fig2", "--format", "dot"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("digraph") != std::string::npos);
  CHECK(r.out.find("->") != std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical output") {
  const CliResult a = invoke({"solve", "enses", "ex1"});
  const CliResult b = invoke({"solve", "enses", "ex1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const CliResult c = invoke({"random-instance", "--seed", "9"});
  const CliResult d = invoke({"random-instance", "--seed", "9"});
  CHECK(c.out == d.out);
}

TEST_CASE("verify passes on a bundled pair") {
  const CliResult r = invoke({"verify", "ex1", "ex1_trade"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["ok"].get<bool>());
}

TEST_CASE("verify accepts a solved four-stage solution") {
  const CliResult solved = invoke({"solve", "enses", "ex1"});
  REQUIRE(solved.code == 0);
  const std::string solution = json::parse(solved.out)["solution"].dump();
  const CliResult r = invoke({"verify", "ex1", "-"}, solution);
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["ok"].get<bool>());
}

TEST_CASE("example parameters pass through the global flags") {
  const CliResult r =
      invoke({"example", "instance", "ex5", "--n", "4"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["states"].size() == 4);
  CHECK(j["types"].size() == 5);
}

TEST_CASE("unknown subcommands and ids are usage errors") {
  CHECK(invoke({"frobnicate"}).code == 3);
  CHECK(invoke({"example", "instance", "ex9"}).code == 3);
}
