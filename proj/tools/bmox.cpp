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

#include "bmox/corpus.hpp"
#include "bmox/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using bmox::OrderedJson;

struct Options {
  std::string space = R"({"space":"lp","p":1.0})";
  std::string function;
  std::string weight = "builtin:const";
  std::string exponent;
  int depth = 8;
  int dim = 1;
  std::string policy = "dyadic";
  double eta = 0.5;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  int jobs = 1;
  std::string kind = "classic";
  double l_max = 64.0;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--depth", opt.depth, "grid depth")->check(CLI::Range(1, 16));
  cmd->add_option("--dim", opt.dim, "grid dimension")->check(CLI::Range(1, 2));
  cmd->add_option("--policy", opt.policy, "cube policy")
      ->check(CLI::IsMember({"all", "dyadic"}));
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opt.out, "write the report to a file");
  cmd->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1, 64));
  cmd->add_option("--seed", opt.seed, "random seed");
}

bmox::GridPtr default_grid(const Options& opt) {
  return std::make_shared<bmox::DyadicGrid>(
      opt.dim, std::array<double, 2>{0.0, 0.0}, 1.0, opt.depth);
}

bmox::GridFunction load_function(const Options& opt) {
  if (opt.function.empty())
    throw std::runtime_error("missing --function (path or builtin:<tag>)");
  if (opt.function.rfind("builtin:", 0) == 0)
    return bmox::builtin_function(default_grid(opt), opt.function.substr(8));
  return bmox::read_grid_function_csv_file(opt.function);
}

bmox::SpaceSpec load_space(const Options& opt, const bmox::GridPtr& grid) {
  std::string text = opt.space;
  if (!text.empty() && text[0] != '{') {
    std::ifstream in(text);
    if (!in) throw std::runtime_error("cannot open space spec '" + text + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return bmox::parse_space_spec(OrderedJson::parse(text), grid);
}

bmox::CubePolicy cube_policy(const Options& opt) {
  return opt.policy == "all" ? bmox::CubePolicy::all()
                             : bmox::CubePolicy::dyadic();
}

bmox::Weight load_weight(const Options& opt, const bmox::GridPtr& grid) {
  if (opt.weight == "builtin:const")
    return bmox::Weight(bmox::GridFunction::constant(grid, 1.0));
  if (opt.weight == "builtin:exp") {
    Eigen::ArrayXd v(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      v[i] = std::exp(grid->cell_center(i)[0]);
    return bmox::Weight(bmox::GridFunction(grid, std::move(v)));
  }
  return bmox::Weight(bmox::read_grid_function_csv_file(opt.weight));
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot write '" + opt.out + "'");
    f << text << "\n";
  }
}

int run(const std::string& cmd, const std::string& scenario, const Options& opt) {
  if (cmd == "norm") {
    bmox::GridFunction f = load_function(opt);
    bmox::SpaceSpec space = load_space(opt, f.grid());
    OrderedJson j;
    j["norm"] = bmox::local_norm(space, f, bmox::GridCube::root(f.grid()));
    j["space"] = space.describe();
    emit(opt, j.dump(2));
    return 0;
  }
  if (cmd == "bmo") {
    bmox::GridFunction f = load_function(opt);
    bmox::SpaceSpec space = load_space(opt, f.grid());
    bmox::OscillationReport r;
    if (opt.kind == "classic")
      r = bmox::bmo_norm(f, cube_policy(opt), opt.jobs);
    else if (opt.kind == "x")
      r = bmox::bmo_x_norm(f, space, cube_policy(opt), opt.jobs);
    else if (opt.kind == "star")
      r = bmox::bmo_x_star_norm(f, space, cube_policy(opt), opt.jobs);
    else if (opt.kind == "mx")
      r = bmox::bmo_mx_norm(f, space, opt.jobs);
    else
      r = bmox::median_oscillation_norm(f, cube_policy(opt), opt.jobs);
    emit(opt, bmox::oscillation_report_to_json(
                  r, opt.kind == "mx" ? "dyadic" : opt.policy,
                  (opt.kind == "classic" || opt.kind == "median")
                      ? "none"
                      : space.describe())
                  .dump(2));
    return 0;
  }
  if (cmd == "sparse") {
    bmox::GridFunction f = load_function(opt);
    auto root = bmox::GridCube::root(f.grid());
    auto cz = bmox::cz_sparse_family(f, root, opt.eta);
    auto check = bmox::verify_sparse(cz.family);
    OrderedJson j = bmox::family_to_json(cz.family);
    j["domination_constant"] = cz.domination_constant;
    j["eta_actual"] = check.eta_actual;
    j["layer_ok"] = check.layer_ok;
    j["seed"] = opt.seed;
    emit(opt, j.dump(2));
    return 0;
  }
  if (cmd == "ainfty") {
    auto grid = default_grid(opt);
    auto report = bmox::ainfty_report(load_weight(opt, grid), grid);
    emit(opt, bmox::ainfty_report_to_json(report).dump(2));
    return 0;
  }
  if (cmd == "psi") {
    auto grid = default_grid(opt);
    bmox::SpaceSpec space = load_space(opt, grid);
    auto policy = opt.policy == "all" ? bmox::EnumeratePolicy::All
                                      : bmox::EnumeratePolicy::Dyadic;
    OrderedJson j;
    j["space"] = space.describe();
    OrderedJson values = OrderedJson::array();
    for (int k = 1; k <= opt.depth; ++k) {
      OrderedJson row;
      row["t"] = std::ldexp(1.0, -k);
      row["psi"] = bmox::psi_pointwise(space, grid, std::ldexp(1.0, -k), policy);
      values.push_back(std::move(row));
    }
    j["values"] = std::move(values);
    j["dyadic_integral"] =
        bmox::psi_dyadic_integral(space, grid, opt.depth, policy);
    emit(opt, j.dump(2));
    return 0;
  }
  if (cmd == "criteria") {
    auto grid = default_grid(opt);
    bmox::SpaceSpec space = load_space(opt, grid);
    bmox::EmbeddingBudget budget;
    budget.policy = cube_policy(opt);
    budget.jobs = opt.jobs;
    auto report =
        bmox::embedding_constants(space, grid, bmox::bmo_corpus(grid), budget);
    emit(opt, bmox::constants_report_to_json(report).dump(2));
    return 0;
  }
  // verify
  bmox::ScenarioReport report;
  if (scenario == "exp-weight") {
    std::vector<double> ls;
    for (double l = 4.0; l <= opt.l_max; l *= 2.0) ls.push_back(l);
    report = bmox::run_exp_weight(ls, opt.depth, opt.jobs);
  } else if (scenario == "varexp") {
    report = bmox::run_varexp(0.2, 0.5, 1.5, {4, 16, 64}, 3);
  } else if (scenario == "orlicz") {
    report = bmox::run_orlicz_scaling({{1.0, 1.0}, {1.0, 4.0}, {3.0, 1.0}}, 20);
  } else {
    report = bmox::run_mw("power", 0.3, std::min(opt.depth, 10), opt.jobs);
  }
  emit(opt, opt.format == "csv" ? bmox::scenario_report_to_csv(report)
                                : bmox::scenario_report_to_json(report).dump(2));
  return report.all_verdicts_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic oscillation-norm laboratory"};
  app.require_subcommand(1);
  Options opt;

  auto* norm = app.add_subcommand("norm", "local space norm on the root cube");
  norm->add_option("--space", opt.space, "space spec (inline JSON or path)");
  norm->add_option("--function", opt.function, "function CSV or builtin:<tag>");
  add_common(norm, opt);

  auto* bmo = app.add_subcommand("bmo", "oscillation norms");
  bmo->add_option("--space", opt.space, "space spec (inline JSON or path)");
  bmo->add_option("--function", opt.function, "function CSV or builtin:<tag>");
  bmo->add_option("--kind", opt.kind, "norm kind")
      ->check(CLI::IsMember({"classic", "x", "star", "mx", "median"}));
  add_common(bmo, opt);

  auto* sparse = app.add_subcommand("sparse", "stopping-time sparse family");
  sparse->add_option("--function", opt.function, "function CSV or builtin:<tag>");
  sparse->add_option("--eta", opt.eta, "target sparseness")
      ->check(CLI::Range(0.01, 0.99));
  add_common(sparse, opt);

  auto* ainfty = app.add_subcommand("ainfty", "A-infinity diagnostics");
  ainfty->add_option("--weight", opt.weight, "weight CSV or builtin:{const,exp}");
  add_common(ainfty, opt);

  auto* psi = app.add_subcommand("psi", "small-subset indicator norms");
  psi->add_option("--space", opt.space, "space spec (inline JSON or path)");
  add_common(psi, opt);

  auto* criteria = app.add_subcommand("criteria", "embedding constant estimates");
  criteria->add_option("--space", opt.space, "space spec (inline JSON or path)");
  add_common(criteria, opt);

  auto* verify = app.add_subcommand("verify", "scripted scenario verdicts");
  std::string scenario;
  verify->add_option("scenario", scenario, "scenario id")
      ->required()
      ->check(CLI::IsMember({"exp-weight", "varexp", "orlicz", "mw"}));
  verify->add_option("--Lmax", opt.l_max, "largest interval length");
  add_common(verify, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), scenario, opt);
  } catch (const std::exception& e) {
    OrderedJson err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 3;
  }
}
