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

#include "bmox/corpus.hpp"
#include "bmox/io.hpp"
#include "bmox/scenarios.hpp"

#include <random>
#include <sstream>

using namespace bmox;

namespace {

GridPtr grid1(int depth) {
  return std::make_shared<DyadicGrid>(1, std::array<double, 2>{0.0, 0.0}, 1.0,
                                      depth);
}

}  // namespace

TEST_CASE("grid csv round trip is bit exact") {
  auto g = std::make_shared<DyadicGrid>(2, std::array<double, 2>{0.25, -1.0},
                                        2.0, 3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  Eigen::ArrayXd v(g->cell_count());
  for (std::int64_t i = 0; i < g->cell_count(); ++i) v[i] = d(rng);
  GridFunction f(g, v);

  std::stringstream buf;
  write_grid_function_csv(f, buf);
  GridFunction back = read_grid_function_csv(buf);
  CHECK(back.grid()->same_layout(*g));
  for (std::int64_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);

  std::stringstream again;
  write_grid_function_csv(back, again);
  CHECK(again.str() == buf.str());
}

TEST_CASE("grid csv rejects malformed input") {
  std::stringstream no_header("1.0\n2.0\n");
  CHECK_THROWS_AS(read_grid_function_csv(no_header), std::runtime_error);
  std::stringstream missing("# grid dim=1 depth=2 side=1\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(read_grid_function_csv(missing), std::runtime_error);
  std::stringstream short_data("# grid dim=1 depth=2 origin=0 side=1\n1\n2\n");
  CHECK_THROWS_AS(read_grid_function_csv(short_data), std::runtime_error);
  std::stringstream long_data(
      "# grid dim=1 depth=1 origin=0 side=1\n1\n2\n3\n");
  CHECK_THROWS_AS(read_grid_function_csv(long_data), std::runtime_error);
}

TEST_CASE("grid csv skips comments and blank lines") {
  std::stringstream in(
      "# grid dim=1 depth=1 origin=0 side=1\n# note\n\n1.5\n-2\n");
  GridFunction f = read_grid_function_csv(in);
  CHECK(f[0] == 1.5);
  CHECK(f[1] == -2.0);
}

TEST_CASE("space spec parsing covers every family") {
  auto g = grid1(4);
  GridCube root = GridCube::root(g);
  GridFunction one = GridFunction::constant(g, 1.0);

  auto lp = parse_space_spec(OrderedJson{{"space", "lp"}, {"p", 2.0}}, g);
  CHECK(local_norm(lp, one, root) == doctest::Approx(1.0));

  auto w = parse_space_spec(
      OrderedJson{{"space", "weighted_l1"}, {"weight", "builtin:const"}}, g);
  CHECK(local_norm(w, one, root) == doctest::Approx(1.0));
  CHECK_NOTHROW(parse_space_spec(
      OrderedJson{{"space", "weighted_l1"}, {"weight", "builtin:exp"}}, g));

  auto el = parse_space_spec(
      OrderedJson{{"space", "orlicz"}, {"phi", "expL"}}, g);
  CHECK(local_norm(el, one, root) ==
        doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-9));
  CHECK_NOTHROW(parse_space_spec(
      OrderedJson{{"space", "orlicz"}, {"phi", "power:2"}}, g));
  CHECK_NOTHROW(parse_space_spec(
      OrderedJson{{"space", "orlicz"}, {"phi", "power_log:1,4"}}, g));

  CHECK_NOTHROW(parse_space_spec(
      OrderedJson{{"space", "varexp"}, {"exponent", "builtin:bump:0.2,1.5"}},
      g));

  CHECK_THROWS_AS(parse_space_spec(OrderedJson{{"space", "nope"}}, g),
                  std::runtime_error);
  CHECK_THROWS_AS(parse_space_spec(OrderedJson::array(), g),
                  std::runtime_error);
  CHECK_THROWS_AS(
      parse_space_spec(OrderedJson{{"space", "orlicz"}, {"phi", "weird"}}, g),
      std::runtime_error);
  CHECK_THROWS_AS(
      parse_space_spec(
          OrderedJson{{"space", "varexp"}, {"exponent", "builtin:bump:0.2"}},
          g),
      std::runtime_error);
}

TEST_CASE("json serializers are deterministic and structurally complete") {
  auto g = grid1(6);
  GridCube root = GridCube::root(g);
  GridFunction f = builtin_staircase(g, 4);

  auto fam = cz_sparse_family(f, root, 0.5).family;
  OrderedJson jf = family_to_json(fam);
  CHECK(jf.dump() == family_to_json(fam).dump());
  CHECK(jf.contains("root"));
  CHECK(jf["eta"] == 0.5);
  CHECK(jf["members"].size() == fam.members().size());
  CHECK(jf["members"][0].contains("exclusive_cells"));

  auto rep = bmo_x_norm(f, SpaceSpec::lp(2.0), CubePolicy::dyadic());
  OrderedJson jr = oscillation_report_to_json(rep, "dyadic", "lp:2.000000");
  CHECK(jr["norm"] == rep.norm);
  CHECK(jr["policy"] == "dyadic");
  CHECK(jr.contains("argmax_cube"));
  CHECK(jr.dump() ==
        oscillation_report_to_json(rep, "dyadic", "lp:2.000000").dump());

  auto consts = embedding_constants(SpaceSpec::lp(2.0), g, bmo_corpus(g));
  OrderedJson jc = constants_report_to_json(consts);
  for (const char* key : {"C1", "C2", "C3", "C4", "C2_family", "corpus"})
    CHECK(jc.contains(key));

  auto ainfty = ainfty_report(Weight(GridFunction::constant(g, 1.0)), g);
  OrderedJson ja = ainfty_report_to_json(ainfty);
  CHECK(ja["fujii_wilson"] == 1.0);
  CHECK(ja.contains("witness_family"));
}

TEST_CASE("scenario serialization: json and csv agree on the table") {
  auto rep = run_orlicz_scaling({{1.0, 1.0}, {3.0, 1.0}}, 12);
  OrderedJson j = scenario_report_to_json(rep);
  CHECK(j["scenario"] == "orlicz-scaling");
  CHECK(j["pass"] == rep.all_verdicts_pass());
  CHECK(j["table"].size() == rep.table.size());
  CHECK(j["verdicts"].size() == rep.verdicts.size());

  std::string csv = scenario_report_to_csv(rep);
  CHECK(csv.rfind("scale,", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == rep.table.size() + 1);
  CHECK(csv == scenario_report_to_csv(rep));
}
