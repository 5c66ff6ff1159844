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

#include "bmox/dyadic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bmox {

/// sum_{j=1..k} chi_{[0, 2^-j)} in side-relative x coordinate.
GridFunction builtin_staircase(const GridPtr& grid, int k);

/// log distance to the point at side-relative position x0 (on both axes in
/// 2d); cell centers never hit thirds, so x0 = 1/3 is always finite.
GridFunction builtin_log_singularity(const GridPtr& grid, double x0);

/// Dyadic martingale with seeded +-1 increments per dyadic cube, levels
/// 1 .. depth.
GridFunction builtin_martingale(const GridPtr& grid, std::uint64_t seed);

/// chi_{[a,b)} in side-relative x coordinate, sampled at cell centers.
GridFunction builtin_indicator(const GridPtr& grid, double a, double b);

/// Identity coordinate x sampled at cell centers (absolute, not relative).
GridFunction builtin_coordinate(const GridPtr& grid);

/// Parses "staircase:K" | "logsingularity:x0" | "martingale:seed" |
/// "indicator:a,b" | "coordinate".
GridFunction builtin_function(const GridPtr& grid, const std::string& tag);

/// Fixed, versioned test set with positive oscillation norms.
std::vector<GridFunction> bmo_corpus(const GridPtr& grid);

/// Seeded corpus of `count` functions mixing indicators, martingales,
/// staircases and log singularities.
std::vector<GridFunction> extended_corpus(const GridPtr& grid, int count,
                                          std::uint64_t seed);

/// Seeded non-empty cell subsets of the root cube: intervals alternate with
/// scattered sets.
std::vector<std::vector<std::int64_t>> random_cell_sets(const GridPtr& grid,
                                                        int count,
                                                        std::uint64_t seed);

}  // namespace bmox
