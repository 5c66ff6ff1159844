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

#include "bmox/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace bmox {

namespace {

struct CubeKey {
  std::int64_t size, cx, cy;
  bool operator==(const CubeKey& o) const {
    return size == o.size && cx == o.cx && cy == o.cy;
  }
};
struct CubeKeyHash {
  std::size_t operator()(const CubeKey& k) const {
    std::size_t h = std::hash<std::int64_t>{}(k.size);
    h = h * 1000003u ^ std::hash<std::int64_t>{}(k.cx);
    h = h * 1000003u ^ std::hash<std::int64_t>{}(k.cy);
    return h;
  }
};

CubeKey key_of(const GridCube& c) {
  return {c.size_cells(), c.corner()[0], c.corner()[1]};
}

// Dyadic ancestor of a cell at size s, relative to the root cube.
CubeKey ancestor_key(const GridCube& root, std::int64_t ix, std::int64_t iy,
                     std::int64_t s) {
  auto rc = root.corner();
  std::int64_t cx = rc[0] + ((ix - rc[0]) / s) * s;
  std::int64_t cy = rc[1] + ((iy - rc[1]) / s) * s;
  return {s, cx, cy};
}

}  // namespace

SparseFamily::SparseFamily(GridCube root, std::vector<GridCube> members, double eta)
    : root_(std::move(root)), members_(std::move(members)), eta_(eta) {
  if (!(eta_ > 0.0 && eta_ < 1.0))
    throw std::domain_error("SparseFamily: eta must be in (0,1)");
  if (members_.empty()) throw std::domain_error("SparseFamily: empty family");
  if (!root_.is_dyadic()) throw std::domain_error("SparseFamily: root must be dyadic");

  std::unordered_map<CubeKey, std::size_t, CubeKeyHash> index;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& P = members_[i];
    if (!P.is_dyadic() || !root_.contains(P))
      throw std::domain_error("SparseFamily: member is not dyadic within the root");
    if (!index.emplace(key_of(P), i).second)
      throw std::domain_error("SparseFamily: duplicate member");
  }

  // |E_P|: each cell of the root belongs to the exclusive set of the smallest
  // member containing it (members are nested or disjoint).
  exclusive_.assign(members_.size(), 0);
  std::int64_t m = root_.grid()->cells_per_axis();
  int dim = root_.grid()->dimension();
  root_.for_each_cell([&](std::int64_t linear) {
    std::int64_t ix = dim == 1 ? linear : linear % m;
    std::int64_t iy = dim == 1 ? 0 : linear / m;
    for (std::int64_t s = 1; s <= root_.size_cells(); s *= 2) {
      auto it = index.find(ancestor_key(root_, ix, iy, s));
      if (it != index.end()) {
        ++exclusive_[it->second];
        break;
      }
    }
  });

  // Layer = number of strict ancestors within the family.
  layer_.assign(members_.size(), 0);
  int max_layer = 0;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto& P = members_[i];
    int l = 0;
    for (std::int64_t s = P.size_cells() * 2; s <= root_.size_cells(); s *= 2) {
      if (index.count(ancestor_key(root_, P.corner()[0], P.corner()[1], s))) ++l;
    }
    layer_[i] = l;
    max_layer = std::max(max_layer, l);
  }

  omega_.assign(static_cast<std::size_t>(max_layer) + 1, 0);
  for (std::size_t i = 0; i < members_.size(); ++i)
    omega_[static_cast<std::size_t>(layer_[i])] += members_[i].cell_count();
}

GridFunction SparseFamily::overlap_function() const {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(root_.grid()->cell_count());
  for (const auto& P : members_)
    P.for_each_cell([&](std::int64_t i) { v[i] += 1.0; });
  return GridFunction(root_.grid(), std::move(v));
}

SparseVerification verify_sparse(const SparseFamily& family) {
  double eta_actual = 1.0;
  const auto& members = family.members();
  for (std::size_t i = 0; i < members.size(); ++i) {
    eta_actual = std::min(eta_actual,
                          static_cast<double>(family.exclusive_cells()[i]) /
                              static_cast<double>(members[i].cell_count()));
  }
  bool layer_ok = true;
  auto rootN = static_cast<long double>(family.root().cell_count());
  long double decay = 1.0L;
  for (std::size_t k = 0; k < family.layer_union_cells().size(); ++k) {
    if (static_cast<long double>(family.layer_union_cells()[k]) >
        decay * rootN * (1.0L + 1e-12L))
      layer_ok = false;
    decay *= (1.0L - static_cast<long double>(eta_actual));
  }
  return {eta_actual, layer_ok};
}

bool layer_bound_exact_half(const SparseFamily& family) {
  std::int64_t rootN = family.root().cell_count();
  const auto& omega = family.layer_union_cells();
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (k >= 63) {
      if (omega[k] != 0) return false;
      continue;
    }
    // cells(Omega_k) * 2^k <= cells(Q), exactly.
    unsigned __int128 lhs =
        static_cast<unsigned __int128>(omega[k]) << static_cast<unsigned>(k);
    if (lhs > static_cast<unsigned __int128>(rootN)) return false;
  }
  return true;
}

namespace {

void cz_recurse(const GridFunction& f, const GridCube& cur, double eta,
                std::vector<GridCube>& members) {
  members.push_back(cur);
  double c = average(f, cur);
  double osc = mean_deviation(f, cur, c);
  if (osc <= 0.0 || cur.size_cells() == 1) return;
  double threshold = osc / (1.0 - eta);

  // Select maximal dyadic strict subcubes whose mean deviation from c
  // exceeds the threshold; descend past the rest.
  std::vector<GridCube> selected;
  std::vector<GridCube> stack;
  auto push_children = [&](const GridCube& P) {
    std::int64_t h = P.size_cells() / 2;
    auto pc = P.corner();
    int dim = P.grid()->dimension();
    for (int sy = 0; sy < (dim == 2 ? 2 : 1); ++sy)
      for (int sx = 0; sx < 2; ++sx)
        stack.emplace_back(P.grid(),
                           std::array<std::int64_t, 2>{pc[0] + sx * h, pc[1] + sy * h},
                           h);
  };
  push_children(cur);
  while (!stack.empty()) {
    GridCube P = stack.back();
    stack.pop_back();
    if (mean_deviation(f, P, c) > threshold)
      selected.push_back(P);
    else if (P.size_cells() > 1)
      push_children(P);
  }
  for (const auto& P : selected) cz_recurse(f, P, eta, members);
}

}  // namespace

CzResult cz_sparse_family(const GridFunction& f, const GridCube& Q, double eta) {
  require_same_grid(f, Q);
  if (!Q.is_dyadic()) throw std::domain_error("cz_sparse_family: Q must be dyadic");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("cz_sparse_family: eta must be in (0,1)");

  std::vector<GridCube> members;
  cz_recurse(f, Q, eta, members);
  SparseFamily family(Q, std::move(members), eta);

  // Cell-wise domination constant.
  Eigen::ArrayXd rhs = Eigen::ArrayXd::Zero(f.grid()->cell_count());
  for (const auto& P : family.members()) {
    double osc = mean_deviation(f, P, average(f, P));
    if (osc > 0.0) P.for_each_cell([&](std::int64_t i) { rhs[i] += osc; });
  }
  double avg_q = average(f, Q);
  double scale = 0.0;
  Q.for_each_cell(
      [&](std::int64_t i) { scale = std::max(scale, std::abs(f[i] - avg_q)); });
  double C = 0.0;
  Q.for_each_cell([&](std::int64_t i) {
    double lhs = std::abs(f[i] - avg_q);
    if (lhs <= 1e-12 * std::max(1.0, scale)) return;
    if (rhs[i] <= 0.0)
      C = std::numeric_limits<double>::infinity();
    else
      C = std::max(C, lhs / rhs[i]);
  });
  return {std::move(family), C};
}

namespace {

void random_build(const GridPtr& grid, const GridCube& P, double eta,
                  std::mt19937_64& rng, std::vector<GridCube>& members) {
  members.push_back(P);
  if (P.size_cells() == 1) return;
  auto budget = static_cast<std::int64_t>(
      std::floor((1.0 - eta) * static_cast<double>(P.cell_count()) + 1e-12));

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<GridCube> tops;
  // Deterministic DFS over D(P); each node is either proposed as a top,
  // descended into, or skipped with its subtree.
  std::vector<GridCube> stack;
  auto push_children = [&](const GridCube& c) {
    std::int64_t h = c.size_cells() / 2;
    auto cc = c.corner();
    int dim = grid->dimension();
    for (int sy = (dim == 2 ? 1 : 0); sy >= 0; --sy)
      for (int sx = 1; sx >= 0; --sx)
        stack.emplace_back(grid,
                           std::array<std::int64_t, 2>{cc[0] + sx * h, cc[1] + sy * h},
                           h);
  };
  push_children(P);
  while (!stack.empty()) {
    GridCube c = stack.back();
    stack.pop_back();
    double r = unif(rng);
    if (r < 0.35)
      tops.push_back(c);
    else if (c.size_cells() > 1 && r < 0.8)
      push_children(c);
  }

  std::int64_t used = 0;
  std::vector<GridCube> accepted;
  for (const auto& t : tops) {
    if (used + t.cell_count() <= budget) {
      used += t.cell_count();
      accepted.push_back(t);
    }
  }
  for (const auto& t : accepted) random_build(grid, t, eta, rng, members);
}

}  // namespace

SparseFamily random_sparse(const GridPtr& grid, const GridCube& Q, double eta,
                           std::uint64_t seed) {
  if (!Q.is_dyadic()) throw std::domain_error("random_sparse: Q must be dyadic");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::domain_error("random_sparse: eta must be in (0,1)");
  std::mt19937_64 rng(seed);
  std::vector<GridCube> members;
  random_build(grid, Q, eta, rng, members);
  return SparseFamily(Q, std::move(members), eta);
}

double sparse_sum_norm(const SparseFamily& family, const SpaceSpec& space) {
  return local_norm(space, family.overlap_function(), family.root());
}

double nested_sum_norm(const GridCube& root,
                       const std::vector<std::vector<std::int64_t>>& omegas,
                       double gamma, const SpaceSpec& space) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("nested_sum_norm: gamma must be in (0,1)");
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(root.grid()->cell_count());
  double bound = static_cast<double>(root.cell_count());
  std::unordered_set<std::int64_t> prev;
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    if (static_cast<double>(omegas[k].size()) > bound * (1.0 + 1e-12))
      throw std::domain_error("nested_sum_norm: decay violated at k=" +
                              std::to_string(k));
    if (k > 0) {
      for (auto i : omegas[k])
        if (!prev.count(i))
          throw std::domain_error("nested_sum_norm: nesting violated at k=" +
                                  std::to_string(k));
    }
    prev.clear();
    for (auto i : omegas[k]) {
      if (!root.contains_cell(i))
        throw std::domain_error("nested_sum_norm: cell outside root");
      sum[i] += 1.0;
      prev.insert(i);
    }
    bound *= gamma;
  }
  return local_norm(space, GridFunction(root.grid(), std::move(sum)), root);
}

}  // namespace bmox
