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
#include "bmox/spaces.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace bmox {

/// Domain of the sup over cubes.
struct CubePolicy {
  enum class Kind { All, DyadicOnly, MaxSide };
  Kind kind = Kind::All;
  std::int64_t side_cap = 0;  // MaxSide only

  static CubePolicy all() { return {Kind::All, 0}; }
  static CubePolicy dyadic() { return {Kind::DyadicOnly, 0}; }
  static CubePolicy max_side(std::int64_t s) { return {Kind::MaxSide, s}; }
};

std::vector<GridCube> policy_cubes(const GridPtr& grid, const CubePolicy& policy);

struct OscillationReport {
  double norm = 0.0;
  std::optional<GridCube> argmax;
  /// Set for quasi-norm star objectives, where the inner minimization is a
  /// grid-plus-refine heuristic and the value is only an upper bound.
  bool upper_bound = false;
  /// Per-cube values, retained on request up to a cap.
  std::vector<std::pair<GridCube, double>> per_cube;
};

/// sup_Q <|f - <f>_Q|>_Q.
OscillationReport bmo_norm(const GridFunction& f, const CubePolicy& policy,
                           int jobs = 1, bool retain_per_cube = false);

/// sup_Q ||f - <f>_Q||_{X_Q}.
OscillationReport bmo_x_norm(const GridFunction& f, const SpaceSpec& space,
                             const CubePolicy& policy, int jobs = 1,
                             bool retain_per_cube = false);

/// sup_Q inf_c ||f - c||_{X_Q}, c bracketed by [min_Q f, max_Q f]. Golden
/// section when the objective is convex in c, a 257-point grid with local
/// refinement otherwise (flagged as an upper bound).
OscillationReport bmo_x_star_norm(const GridFunction& f, const SpaceSpec& space,
                                  const CubePolicy& policy, int jobs = 1,
                                  bool retain_per_cube = false);

/// sup over dyadic Q of ||M_Q((f - <f>_Q) chi_Q)||_{X_Q} with the local
/// dyadic maximal operator.
OscillationReport bmo_mx_norm(const GridFunction& f, const SpaceSpec& space,
                              int jobs = 1, bool retain_per_cube = false);

/// sup_Q inf_c ((f - c) chi_Q)^*(|Q|/2) with the left-continuous
/// rearrangement; the inner minimum is exact (narrowest window over the
/// sorted values of f on Q).
OscillationReport median_oscillation_norm(const GridFunction& f,
                                          const CubePolicy& policy, int jobs = 1,
                                          bool retain_per_cube = false);

struct JnDecayResult {
  bool holds;     // the bound holds with C = c_target on the alpha grid
  double best_c;  // largest C for which it holds, by monotone bisection
};

/// Checks |{x in Q : |f - <f>_Q| > a}| <= 2|Q| exp(-C a / ||f||) on an alpha
/// grid, with ||f|| the dyadic-policy oscillation norm of f.
JnDecayResult jn_decay_check(const GridFunction& f, const GridCube& Q,
                             double c_target);

/// bmo_x_norm(|f|) / bmo_x_norm(f); throws when the denominator vanishes.
double abs_mapping_ratio(const GridFunction& f, const SpaceSpec& space,
                         const CubePolicy& policy);

}  // namespace bmox
