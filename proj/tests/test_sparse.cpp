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
#include "bmox/sparse.hpp"

#include <cmath>

using namespace bmox;

namespace {

GridPtr grid1(int depth) {
  return std::make_shared<DyadicGrid>(1, std::array<double, 2>{0.0, 0.0}, 1.0,
                                      depth);
}

}  // namespace

TEST_CASE("family bookkeeping on a hand-built chain") {
  auto g = grid1(3);
  GridCube root = GridCube::root(g);
  std::vector<GridCube> members{root, GridCube(g, {0, 0}, 4), GridCube(g, {0, 0}, 2)};
  SparseFamily fam(root, members, 0.5);
  CHECK(fam.exclusive_cells() == std::vector<std::int64_t>{4, 2, 2});
  CHECK(fam.layers() == std::vector<int>{0, 1, 2});
  CHECK(fam.layer_union_cells() == std::vector<std::int64_t>{8, 4, 2});
  CHECK(layer_bound_exact_half(fam));
  auto check = verify_sparse(fam);
  CHECK(check.eta_actual == doctest::Approx(0.5));
  CHECK(check.layer_ok);

  GridFunction overlap = fam.overlap_function();
  CHECK(overlap[0] == 3.0);
  CHECK(overlap[3] == 2.0);
  CHECK(overlap[7] == 1.0);

  CHECK_THROWS_AS(SparseFamily(root, {GridCube(g, {1, 0}, 2)}, 0.5),
                  std::domain_error);
  CHECK_THROWS_AS(SparseFamily(root, {}, 0.5), std::domain_error);
  CHECK_THROWS_AS(SparseFamily(root, members, 1.5), std::domain_error);
}

TEST_CASE("stopping time: flat oscillation selects nothing") {
  auto g = grid1(4);
  GridCube root = GridCube::root(g);
  // f = +1 on the left half, -1 on the right: <|f - 0|>_P = 1 on every
  // dyadic P, so the threshold 2 is never exceeded.
  Eigen::ArrayXd v(16);
  for (int i = 0; i < 16; ++i) v[i] = i < 8 ? 1.0 : -1.0;
  auto res = cz_sparse_family(GridFunction(g, v), root, 0.5);
  CHECK(res.family.members().size() == 1);
  CHECK(res.family.members()[0] == root);
  CHECK(res.domination_constant == doctest::Approx(1.0));
}

TEST_CASE("stopping time: constant input gives the trivial family") {
  auto g = grid1(4);
  auto res = cz_sparse_family(GridFunction::constant(g, 3.25),
                              GridCube::root(g), 0.5);
  CHECK(res.family.members().size() == 1);
  CHECK(res.domination_constant == 0.0);
}

TEST_CASE("stopping time outputs verify as half-sparse with bounded domination") {
  auto g = grid1(8);
  GridCube root = GridCube::root(g);
  for (const auto& f : bmo_corpus(g)) {
    auto res = cz_sparse_family(f, root, 0.5);
    auto check = verify_sparse(res.family);
    CHECK(check.eta_actual >= 0.5);
    CHECK(check.layer_ok);
    CHECK(layer_bound_exact_half(res.family));
    CHECK(res.domination_constant <= 5.0);
    // Stage-wise measure bound, exact in cells: every non-root member P has
    // |E_P| >= |P| / 2.
    for (std::size_t i = 0; i < res.family.members().size(); ++i)
      CHECK(2 * res.family.exclusive_cells()[i] >=
            res.family.members()[i].cell_count());
  }
}

TEST_CASE("random families are reproducible and honor the cell budget") {
  auto g = grid1(7);
  GridCube root = GridCube::root(g);
  for (std::uint64_t seed : {1u, 2u, 42u}) {
    SparseFamily a = random_sparse(g, root, 0.5, seed);
    SparseFamily b = random_sparse(g, root, 0.5, seed);
    REQUIRE(a.members().size() == b.members().size());
    for (std::size_t i = 0; i < a.members().size(); ++i)
      CHECK(a.members()[i] == b.members()[i]);
    auto check = verify_sparse(a);
    CHECK(check.eta_actual >= 0.5);
    CHECK(layer_bound_exact_half(a));
  }
  // Extreme eta keeps the family near-trivial.
  SparseFamily tight = random_sparse(g, root, 0.99, 3);
  for (std::size_t i = 0; i < tight.members().size(); ++i)
    CHECK(tight.exclusive_cells()[i] >=
          static_cast<std::int64_t>(
              std::floor(0.99 * static_cast<double>(tight.members()[i].cell_count()))));
}

TEST_CASE("overlap norms: L1 of a half-sparse family stays below two") {
  auto g = grid1(7);
  GridCube root = GridCube::root(g);
  SpaceSpec lp1 = SpaceSpec::lp(1.0);
  for (std::uint64_t seed : {5u, 6u, 7u, 8u}) {
    SparseFamily fam = random_sparse(g, root, 0.5, seed);
    CHECK(sparse_sum_norm(fam, lp1) <= 2.0 + 1e-12);
  }
}

TEST_CASE("nested sums: value, nesting and decay validation") {
  auto g = grid1(3);
  GridCube root = GridCube::root(g);
  std::vector<std::vector<std::int64_t>> chain{
      {0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 3}, {0, 1}, {0}};
  SpaceSpec lp1 = SpaceSpec::lp(1.0);
  CHECK(nested_sum_norm(root, chain, 0.5, lp1) ==
        doctest::Approx(15.0 / 8.0));

  auto broken = chain;
  broken[2] = {0, 7};  // not inside layer 1
  CHECK_THROWS_WITH_AS(nested_sum_norm(root, broken, 0.5, lp1),
                       "nested_sum_norm: nesting violated at k=2",
                       std::domain_error);
  auto fat = chain;
  fat[1] = {0, 1, 2, 3, 4};  // decays slower than 1/2
  CHECK_THROWS_WITH_AS(nested_sum_norm(root, fat, 0.5, lp1),
                       "nested_sum_norm: decay violated at k=1",
                       std::domain_error);
}
