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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bmox {

namespace {

double relative_x(const DyadicGrid& g, std::int64_t linear) {
  return (g.cell_center(linear)[0] - g.origin()[0]) / g.side();
}

}  // namespace

GridFunction builtin_staircase(const GridPtr& grid, int k) {
  if (k < 1) throw std::domain_error("staircase: k must be >= 1");
  Eigen::ArrayXd v(grid->cell_count());
  for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
    double x = relative_x(*grid, i);
    double s = 0.0;
    for (int j = 1; j <= k; ++j)
      if (x < std::ldexp(1.0, -j)) s += 1.0;
    v[i] = s;
  }
  return GridFunction(grid, std::move(v));
}

GridFunction builtin_log_singularity(const GridPtr& grid, double x0) {
  double px = grid->origin()[0] + x0 * grid->side();
  double py = grid->dimension() == 2 ? grid->origin()[1] + x0 * grid->side() : 0.0;
  Eigen::ArrayXd v(grid->cell_count());
  for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
    auto c = grid->cell_center(i);
    double d = grid->dimension() == 1 ? std::abs(c[0] - px)
                                      : std::hypot(c[0] - px, c[1] - py);
    if (!(d > 0.0))
      throw std::domain_error("logsingularity: singular point hits a cell center");
    v[i] = std::log(d);
  }
  return GridFunction(grid, std::move(v));
}

GridFunction builtin_martingale(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid->cell_count());
  std::int64_t m = grid->cells_per_axis();
  for (int level = 1; level <= grid->depth(); ++level) {
    std::int64_t size = m >> level;
    std::int64_t per_axis = m / size;
    std::int64_t count = grid->dimension() == 1 ? per_axis : per_axis * per_axis;
    for (std::int64_t q = 0; q < count; ++q) {
      double sign = (rng() & 1u) ? 1.0 : -1.0;
      std::int64_t cx = (grid->dimension() == 1 ? q : q % per_axis) * size;
      std::int64_t cy = (grid->dimension() == 1 ? 0 : q / per_axis) * size;
      GridCube cube(grid, {cx, cy}, size);
      cube.for_each_cell([&](std::int64_t i) { v[i] += sign; });
    }
  }
  return GridFunction(grid, std::move(v));
}

GridFunction builtin_indicator(const GridPtr& grid, double a, double b) {
  if (!(a < b)) throw std::domain_error("indicator: need a < b");
  Eigen::ArrayXd v(grid->cell_count());
  for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
    double x = relative_x(*grid, i);
    v[i] = (x >= a && x < b) ? 1.0 : 0.0;
  }
  return GridFunction(grid, std::move(v));
}

GridFunction builtin_coordinate(const GridPtr& grid) {
  Eigen::ArrayXd v(grid->cell_count());
  for (std::int64_t i = 0; i < grid->cell_count(); ++i)
    v[i] = grid->cell_center(i)[0];
  return GridFunction(grid, std::move(v));
}

GridFunction builtin_function(const GridPtr& grid, const std::string& tag) {
  auto colon = tag.find(':');
  std::string head = tag.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : tag.substr(colon + 1);
  try {
    if (head == "staircase") return builtin_staircase(grid, std::stoi(rest));
    if (head == "logsingularity")
      return builtin_log_singularity(grid, std::stod(rest));
    if (head == "martingale")
      return builtin_martingale(grid, std::stoull(rest));
    if (head == "indicator") {
      auto comma = rest.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("indicator needs a,b");
      return builtin_indicator(grid, std::stod(rest.substr(0, comma)),
                               std::stod(rest.substr(comma + 1)));
    }
    if (head == "coordinate") return builtin_coordinate(grid);
  } catch (const std::invalid_argument&) {
    throw std::domain_error("builtin function: malformed tag '" + tag + "'");
  }
  throw std::domain_error("builtin function: unknown tag '" + tag + "'");
}

std::vector<GridFunction> bmo_corpus(const GridPtr& grid) {
  std::vector<GridFunction> corpus;
  corpus.push_back(builtin_log_singularity(grid, 1.0 / 3.0));
  corpus.push_back(builtin_staircase(grid, grid->depth()));
  corpus.push_back(builtin_staircase(grid, std::max(1, grid->depth() / 2)));
  corpus.push_back(builtin_martingale(grid, 11));
  corpus.push_back(builtin_martingale(grid, 12));
  corpus.push_back(builtin_martingale(grid, 13));
  corpus.push_back(builtin_indicator(grid, 0.0, 0.5));
  corpus.push_back(builtin_indicator(grid, 0.25, 0.75));
  corpus.push_back(builtin_indicator(grid, 0.0, 0.125));
  corpus.push_back(builtin_coordinate(grid));
  // Logarithm of the maximal function of a quarter-size indicator: the
  // canonical unbounded-but-oscillation-bounded profile.
  {
    GridFunction chi = builtin_indicator(grid, 0.0, 0.25);
    GridFunction m = maximal_all_cubes(chi);
    double ratio = 4.0;
    Eigen::ArrayXd v(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      v[i] = std::max(std::log(ratio * m[i]), 0.0);
    corpus.emplace_back(grid, std::move(v));
  }
  return corpus;
}

std::vector<GridFunction> extended_corpus(const GridPtr& grid, int count,
                                          std::uint64_t seed) {
  if (count < 1) throw std::domain_error("extended_corpus: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::int64_t n = grid->cell_count();
  std::vector<GridFunction> corpus;
  corpus.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    switch (i % 4) {
      case 0: {
        std::uniform_int_distribution<std::int64_t> cell(0, n - 1);
        std::int64_t a = cell(rng), b = cell(rng);
        if (a > b) std::swap(a, b);
        Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n);
        for (std::int64_t j = a; j <= b; ++j) v[j] = 1.0;
        corpus.emplace_back(grid, std::move(v));
        break;
      }
      case 1:
        corpus.push_back(builtin_martingale(grid, rng()));
        break;
      case 2:
        corpus.push_back(
            builtin_staircase(grid, 1 + i % std::max(1, grid->depth())));
        break;
      default: {
        std::uniform_real_distribution<double> pos(0.05, 0.95);
        GridFunction base = builtin_log_singularity(grid, 1.0 / 3.0 + 1e-4 * pos(rng));
        GridFunction mart = builtin_martingale(grid, rng());
        corpus.push_back(base.with_values(base.values() + mart.values()));
        break;
      }
    }
  }
  return corpus;
}

std::vector<std::vector<std::int64_t>> random_cell_sets(const GridPtr& grid,
                                                        int count,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::int64_t n = grid->cell_count();
  std::uniform_int_distribution<std::int64_t> cell(0, n - 1);
  std::vector<std::vector<std::int64_t>> sets;
  sets.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<std::int64_t> cells;
    if (i % 2 == 0) {
      std::int64_t a = cell(rng), b = cell(rng);
      if (a > b) std::swap(a, b);
      for (std::int64_t j = a; j <= b; ++j) cells.push_back(j);
    } else {
      std::int64_t k = 1 + cell(rng) % std::max<std::int64_t>(1, n / 4);
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      for (std::int64_t j = 0; j < k; ++j) {
        std::int64_t c = cell(rng);
        if (!used[static_cast<std::size_t>(c)]) {
          used[static_cast<std::size_t>(c)] = 1;
          cells.push_back(c);
        }
      }
      std::sort(cells.begin(), cells.end());
    }
    sets.push_back(std::move(cells));
  }
  return sets;
}

}  // namespace bmox
