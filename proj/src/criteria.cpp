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

#include "bmox/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bmox {

namespace {

std::vector<GridCube> children_of(const GridCube& P) {
  std::vector<GridCube> ch;
  std::int64_t h = P.size_cells() / 2;
  auto pc = P.corner();
  int dim = P.grid()->dimension();
  for (int sy = 0; sy < (dim == 2 ? 2 : 1); ++sy)
    for (int sx = 0; sx < 2; ++sx)
      ch.emplace_back(P.grid(),
                      std::array<std::int64_t, 2>{pc[0] + sx * h, pc[1] + sy * h},
                      h);
  return ch;
}

std::vector<std::vector<std::int64_t>> aligned_chain(const GridPtr& grid,
                                                     bool from_left) {
  std::int64_t n = grid->cell_count();
  std::vector<std::vector<std::int64_t>> chain;
  for (std::int64_t size = n; size >= 1; size /= 2) {
    std::vector<std::int64_t> cells(static_cast<std::size_t>(size));
    for (std::int64_t i = 0; i < size; ++i)
      cells[static_cast<std::size_t>(i)] = from_left ? i : n - size + i;
    chain.push_back(std::move(cells));
  }
  return chain;
}

std::vector<std::vector<std::int64_t>> random_chain(const GridPtr& grid,
                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> cur(static_cast<std::size_t>(grid->cell_count()));
  for (std::size_t i = 0; i < cur.size(); ++i)
    cur[i] = static_cast<std::int64_t>(i);
  std::vector<std::vector<std::int64_t>> chain;
  while (!cur.empty()) {
    auto sorted = cur;
    std::sort(sorted.begin(), sorted.end());
    chain.push_back(sorted);
    if (cur.size() == 1) break;
    std::shuffle(cur.begin(), cur.end(), rng);
    cur.resize(cur.size() / 2);
  }
  return chain;
}

void greedy_weight_family(const Weight& w, const GridCube& P,
                          std::vector<GridCube>& members) {
  members.push_back(P);
  if (P.size_cells() == 1) return;
  auto ch = children_of(P);
  std::stable_sort(ch.begin(), ch.end(), [&](const GridCube& a, const GridCube& b) {
    return w.mass(a) > w.mass(b);
  });
  std::int64_t budget = P.cell_count() / 2;
  std::int64_t used = 0;
  for (const auto& c : ch) {
    if (used + c.cell_count() <= budget) {
      used += c.cell_count();
      greedy_weight_family(w, c, members);
    }
  }
}

}  // namespace

ConstantsReport embedding_constants(const SpaceSpec& space, const GridPtr& grid,
                                    const std::vector<GridFunction>& corpus,
                                    const EmbeddingBudget& budget) {
  if (corpus.empty()) throw std::domain_error("embedding_constants: empty corpus");
  ConstantsReport report;
  report.corpus_descriptor = "corpus[" + std::to_string(corpus.size()) +
                             "] sparse_seeds=" + std::to_string(budget.sparse_seeds) +
                             " chain_seeds=" + std::to_string(budget.chain_seeds);
  GridCube root = GridCube::root(grid);

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    double denom = bmo_norm(corpus[i], budget.policy, budget.jobs).norm;
    if (!(denom > 0.0))
      throw std::domain_error("embedding_constants: corpus member " +
                              std::to_string(i) + " has zero oscillation norm");
    double r = bmo_x_norm(corpus[i], space, budget.policy, budget.jobs).norm / denom;
    if (r > report.c1) {
      report.c1 = r;
      report.c1_corpus_index = i;
    }
  }

  auto consider_family = [&](SparseFamily family) {
    double v = sparse_sum_norm(family, space);
    if (v > report.c2) {
      report.c2 = v;
      report.c2_family = std::move(family);
    }
  };
  for (const auto& f : corpus)
    consider_family(std::move(cz_sparse_family(f, root, 0.5).family));
  for (int s = 0; s < budget.sparse_seeds; ++s)
    consider_family(random_sparse(grid, root, 0.5, 1000 + static_cast<std::uint64_t>(s)));

  auto consider_chain = [&](std::vector<std::vector<std::int64_t>> chain) {
    double v = nested_sum_norm(root, chain, 0.5, space);
    if (v > report.c3) {
      report.c3 = v;
      report.c3_chain = std::move(chain);
    }
  };
  consider_chain(aligned_chain(grid, true));
  consider_chain(aligned_chain(grid, false));
  for (int s = 0; s < budget.chain_seeds; ++s)
    consider_chain(random_chain(grid, 2000 + static_cast<std::uint64_t>(s)));

  SpaceSpec expl = SpaceSpec::orlicz(OrliczFunction::exp_l());
  std::vector<GridFunction> ball_sample;
  for (std::int64_t size = grid->cell_count(); size >= 1; size /= 2) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid->cell_count());
    for (std::int64_t i = 0; i < size; ++i) v[i] = 1.0;
    ball_sample.emplace_back(grid, std::move(v));
  }
  for (int k = 1; k <= grid->depth(); ++k) {
    Eigen::ArrayXd v(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
      double s = 0.0;
      std::int64_t cut = grid->cell_count();
      for (int j = 1; j <= k && cut > 1; ++j) {
        cut /= 2;
        if (i < cut) s += 1.0;
      }
      v[i] = s;
    }
    ball_sample.emplace_back(grid, std::move(v));
  }
  for (const auto& f : corpus) ball_sample.push_back(f);
  for (const auto& f : ball_sample) {
    double d = local_norm(expl, f, root);
    if (!(d > 0.0)) continue;
    GridFunction g = f.with_values(f.values() / d);
    double v = local_norm(space, g, root);
    if (v > report.c4) {
      report.c4 = v;
      report.c4_function = std::move(g);
    }
  }
  return report;
}

AinftyReport ainfty_report(const Weight& w, const GridPtr& grid, int seeds) {
  AinftyReport report;
  double best = 1.0;
  for (const auto& Q : enumerate_cubes(grid, EnumeratePolicy::Dyadic)) {
    if (Q.size_cells() == 1) continue;  // M(w chi) = w on a single cell
    int depth = 0;
    for (std::int64_t s = Q.size_cells(); s > 1; s /= 2) ++depth;
    auto sub = std::make_shared<DyadicGrid>(grid->dimension(),
                                            std::array<double, 2>{0.0, 0.0}, 1.0,
                                            depth);
    Eigen::ArrayXd vals(sub->cell_count());
    std::int64_t at = 0;
    Q.for_each_cell([&](std::int64_t i) { vals[at++] = w.values()[i]; });
    double mass = vals.sum();
    GridFunction m = maximal_all_cubes(GridFunction(sub, std::move(vals)));
    best = std::max(best, m.values().sum() / mass);
  }
  report.fujii_wilson = best;

  GridCube root = GridCube::root(grid);
  double root_mass = w.mass(root);
  auto consider = [&](SparseFamily family) {
    double sum = 0.0;
    for (const auto& P : family.members()) sum += w.mass(P);
    double v = sum / root_mass;
    if (v > report.sparse_sup) {
      report.sparse_sup = v;
      report.witness = std::move(family);
    }
  };
  {
    std::vector<GridCube> members;
    greedy_weight_family(w, root, members);
    consider(SparseFamily(root, std::move(members), 0.5));
  }
  for (int s = 0; s < seeds; ++s)
    consider(random_sparse(grid, root, 0.5, 500 + static_cast<std::uint64_t>(s)));
  return report;
}

double coifman_rochberg_norm(const GridFunction& f, const CubePolicy& policy,
                             int jobs) {
  if ((f.values() < 0.0).any())
    throw std::domain_error("coifman_rochberg_norm: f must be nonnegative");
  if (!(f.values() > 0.0).any())
    throw std::domain_error("coifman_rochberg_norm: f is identically zero");
  GridFunction m = maximal_all_cubes(f);
  return bmo_norm(m.with_values(m.values().log()), policy, jobs).norm;
}

GridFunction converse_test_function(const std::vector<std::int64_t>& e_cells,
                                    const GridCube& Q) {
  if (e_cells.empty())
    throw std::domain_error("converse_test_function: empty set");
  const GridPtr& grid = Q.grid();
  Eigen::ArrayXd chi = Eigen::ArrayXd::Zero(grid->cell_count());
  for (auto i : e_cells) {
    if (!Q.contains_cell(i))
      throw std::domain_error("converse_test_function: cell outside Q");
    chi[i] = 1.0;
  }
  GridFunction m = maximal_all_cubes(GridFunction(grid, std::move(chi)));
  double ratio = static_cast<double>(Q.cell_count()) /
                 static_cast<double>(e_cells.size());
  Eigen::ArrayXd g = Eigen::ArrayXd::Zero(grid->cell_count());
  Q.for_each_cell(
      [&](std::int64_t i) { g[i] = std::max(std::log(ratio * m[i]), 0.0); });
  return GridFunction(grid, std::move(g));
}

}  // namespace bmox
