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

#pragma once

#include "bmox/bmo.hpp"
#include "bmox/sparse.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bmox {

struct EmbeddingBudget {
  int sparse_seeds = 8;
  int chain_seeds = 8;
  CubePolicy policy = CubePolicy::dyadic();
  int jobs = 1;
};

/// Certified lower bounds for the four mutually equivalent embedding
/// constants, found by search over the corpus, sparse families, nested
/// chains, and a unit-ball sample.
struct ConstantsReport {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  std::size_t c1_corpus_index = 0;
  std::optional<SparseFamily> c2_family;
  std::vector<std::vector<std::int64_t>> c3_chain;
  std::optional<GridFunction> c4_function;
  std::string corpus_descriptor;
};

ConstantsReport embedding_constants(const SpaceSpec& space, const GridPtr& grid,
                                    const std::vector<GridFunction>& corpus,
                                    const EmbeddingBudget& budget = {});

struct AinftyReport {
  double fujii_wilson = 1.0;
  double sparse_sup = 1.0;
  std::optional<SparseFamily> witness;
};

/// fujii_wilson: sup over dyadic Q of w(Q)^{-1} int_Q M(w chi_Q), with M over
/// all grid cubes (restriction to Q is exact: zero-padded averages only
/// shrink). sparse_sup: max over {root}, a greedy weight-chasing family, and
/// seeded random half-sparse families of sum_P w(P) / w(Q).
AinftyReport ainfty_report(const Weight& w, const GridPtr& grid, int seeds = 8);

/// ||log M f||_BMO over the given cube policy; requires f >= 0, f not
/// identically zero.
double coifman_rochberg_norm(const GridFunction& f, const CubePolicy& policy,
                             int jobs = 1);

/// g = max(log((|Q|/|E|) M chi_E), 0) on Q, zero outside.
GridFunction converse_test_function(const std::vector<std::int64_t>& e_cells,
                                    const GridCube& Q);

}  // namespace bmox
