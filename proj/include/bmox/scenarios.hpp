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

#include <string>
#include <utility>
#include <vector>

namespace bmox {

struct ScenarioRow {
  double scale;
  std::vector<std::pair<std::string, double>> quantities;
};

struct ScenarioReport {
  std::string id;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<ScenarioRow> table;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<std::pair<std::string, double>> tolerances;

  bool all_verdicts_pass() const {
    for (const auto& [name, ok] : verdicts)
      if (!ok) return false;
    return true;
  }
};

/// f(x) = x against the weight e^x on [0, L]: the classical oscillation grows
/// like L/4 while the weighted star oscillation plateaus.
ScenarioReport run_exp_weight(const std::vector<double>& l_values, int depth,
                              int jobs = 1);

/// Variable exponent p(x) = 1 + sum of smooth bumps at the integers on
/// [eps/2, side + eps/2]: closed-form indicator norms, lower-bounded
/// delta-margin, vanishing small-exponent ratio, and square-root psi decay.
ScenarioReport run_varexp(double eps, double delta, double rho,
                          const std::vector<int>& m_values, int depth_per_unit);

/// phi(t) = t^p (1 + log+ t)^alpha: the dyadic psi integral scales like
/// p + alpha.
ScenarioReport run_orlicz_scaling(const std::vector<std::pair<double, double>>& pairs,
                                  int k_terms);

/// Weighted L1 against an A-infinity-class weight: the classical, weighted,
/// and weighted-star oscillation norms agree up to a bounded factor.
/// weight_tag is one of "const", "power" (exponent a), "exp_local".
ScenarioReport run_mw(const std::string& weight_tag, double a, int depth,
                      int jobs = 1);

}  // namespace bmox
