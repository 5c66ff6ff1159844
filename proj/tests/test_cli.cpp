/*
 *   Copyright (c) 2026, the bmox authors
 *
 *   Licensed under the Apache License, Version 2.0 (the "License");
 *   you may not use this file except in compliance with the License.
 *   You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 *   Unless required by applicable law or agreed to in writing, software
 *   distributed under the License is distributed on an "AS IS" BASIS,
 *   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *   See the License for the specific language governing permissions and
 *   limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef BMOX_CLI_PATH
#error "BMOX_CLI_PATH must be defined by the build"
#endif
#ifndef BMOX_SCHEMA_DIR
#error "BMOX_SCHEMA_DIR must be defined by the build"
#endif

namespace {

using Json = nlohmann::json;

struct RunResult {
  int code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string out_path = "cli_stdout.tmp";
  std::string cmd = std::string(BMOX_CLI_PATH) + " " + args + " > " + out_path +
                    " 2> cli_stderr.tmp";
  int rc = std::system(cmd.c_str());
  int code = (rc >= 0 && (rc & 0x7f) == 0) ? ((rc >> 8) & 0xff) : -1;
  std::ifstream f(out_path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return {code, ss.str()};
}

Json load_schema(const std::string& name) {
  std::ifstream f(std::string(BMOX_SCHEMA_DIR) + "/" + name);
  REQUIRE(f.good());
  return Json::parse(f);
}

// Structural validator for the subset of json-schema the reports use:
// type, required, properties, items.
bool type_matches(const Json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  return false;
}

bool validate(const Json& value, const Json& schema, std::string& why,
              const std::string& at = "$") {
  if (schema.contains("type") &&
      !type_matches(value, schema["type"].get<std::string>())) {
    why = at + ": expected " + schema["type"].get<std::string>();
    return false;
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) {
        why = at + ": missing '" + key.get<std::string>() + "'";
        return false;
      }
    }
  if (schema.contains("properties") && value.is_object())
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (!value.contains(key)) continue;
      if (!validate(value[key], sub, why, at + "." + key)) return false;
    }
  if (schema.contains("items") && value.is_array())
    for (std::size_t i = 0; i < value.size(); ++i)
      if (!validate(value[i], schema["items"], why,
                    at + "[" + std::to_string(i) + "]"))
        return false;
  return true;
}

void check_schema(const std::string& payload, const std::string& schema_name) {
  std::string why;
  bool ok = validate(Json::parse(payload), load_schema(schema_name), why);
  INFO(schema_name, ": ", why);
  CHECK(ok);
}

}  // namespace

TEST_CASE("norm and bmo reports match their schemas") {
  auto norm = run_cli(
      "norm --function builtin:indicator:0,0.5 --space '{\"space\":\"lp\",\"p\":2.0}'");
  CHECK(norm.code == 0);
  check_schema(norm.out, "norm_report.json");
  CHECK(Json::parse(norm.out)["norm"].get<double>() ==
        doctest::Approx(std::sqrt(0.5)));

  for (const std::string kind : {"classic", "x", "star", "mx", "median"}) {
    auto r = run_cli("bmo --function builtin:martingale:3 --depth 6 --kind " +
                     kind + " --space '{\"space\":\"orlicz\",\"phi\":\"expL\"}'");
    CHECK(r.code == 0);
    check_schema(r.out, "oscillation_report.json");
  }
}

TEST_CASE("sparse output is schema-valid and byte-stable across runs and jobs") {
  std::string args = "sparse --seed 1 --function builtin:martingale:9 --depth 8";
  auto a = run_cli(args + " --jobs 1");
  auto b = run_cli(args + " --jobs 1");
  auto c = run_cli(args + " --jobs 4");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  check_schema(a.out, "sparse_family.json");
  Json j = Json::parse(a.out);
  CHECK(j["eta_actual"].get<double>() >= 0.5);
  CHECK(j["layer_ok"].get<bool>());
}

TEST_CASE("ainfty, psi and criteria reports match their schemas") {
  auto a = run_cli("ainfty --weight builtin:exp --depth 7");
  CHECK(a.code == 0);
  check_schema(a.out, "ainfty_report.json");

  auto p = run_cli(
      "psi --depth 10 --space '{\"space\":\"orlicz\",\"phi\":\"expL\"}'");
  CHECK(p.code == 0);
  check_schema(p.out, "psi_report.json");
  CHECK(Json::parse(p.out)["values"].size() == 10);

  auto cr = run_cli(
      "criteria --depth 7 --space '{\"space\":\"lp\",\"p\":2.0}'");
  CHECK(cr.code == 0);
  check_schema(cr.out, "constants_report.json");
}

TEST_CASE("verify subcommands are deterministic and report verdicts") {
  for (const std::string scenario :
       {std::string("orlicz"), std::string("mw --depth 7"),
        std::string("exp-weight --Lmax 16 --depth 9")}) {
    auto a = run_cli("verify " + scenario + " --jobs 1");
    auto b = run_cli("verify " + scenario + " --jobs 1");
    auto c = run_cli("verify " + scenario + " --jobs 4");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    check_schema(a.out, "scenario_report.json");
    CHECK(Json::parse(a.out)["pass"].get<bool>());
  }
  auto csv = run_cli("verify orlicz --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("scale,", 0) == 0);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("bmo --function builtin:coordinate --depth 40").code == 2);
  CHECK(run_cli("bmo --no-such-flag").code == 2);
  CHECK(run_cli("verify bogus").code == 2);
  CHECK(run_cli("verify").code == 2);
  CHECK(run_cli("").code == 2);
}

TEST_CASE("runtime failures exit with code 3 and a structured error") {
  auto missing = run_cli("bmo");
  CHECK(missing.code == 3);
  check_schema(missing.out, "error_report.json");

  auto badfile = run_cli("norm --function does_not_exist.csv");
  CHECK(badfile.code == 3);
  check_schema(badfile.out, "error_report.json");

  auto badspace = run_cli(
      "norm --function builtin:coordinate --space '{\"space\":\"nope\"}'");
  CHECK(badspace.code == 3);
  check_schema(badspace.out, "error_report.json");
}

TEST_CASE("file output matches stdout output") {
  std::string args =
      "norm --function builtin:staircase:3 --space '{\"space\":\"lp\",\"p\":1.0}'";
  auto direct = run_cli(args);
  auto filed = run_cli(args + " --out cli_file_out.tmp");
  CHECK(filed.code == 0);
  CHECK(filed.out.empty());
  std::ifstream f("cli_file_out.tmp");
  std::ostringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == direct.out);
}
