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
#include "bmox/criteria.hpp"
#include "bmox/scenarios.hpp"
#include "bmox/sparse.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace bmox {

using OrderedJson = nlohmann::ordered_json;

/// CSV with a `# grid dim=.. depth=.. origin=.. side=..` header line, then
/// one value per line in row-major cell order.
GridFunction read_grid_function_csv(std::istream& in);
GridFunction read_grid_function_csv_file(const std::string& path);
void write_grid_function_csv(const GridFunction& f, std::ostream& out);

/// {"space":"lp","p":..} | {"space":"weighted_l1","weight":"<path>|builtin:exp|builtin:const"}
/// | {"space":"orlicz","phi":"expL"|"power:<p>"|"power_log:<p>,<alpha>"}
/// | {"space":"varexp","exponent":"<path>|builtin:bump:<eps>,<rho>"}.
SpaceSpec parse_space_spec(const OrderedJson& j, const GridPtr& grid);

OrderedJson cube_to_json(const GridCube& Q);
OrderedJson family_to_json(const SparseFamily& family);
OrderedJson oscillation_report_to_json(const OscillationReport& report,
                                       const std::string& policy,
                                       const std::string& space);
OrderedJson constants_report_to_json(const ConstantsReport& report);
OrderedJson ainfty_report_to_json(const AinftyReport& report);
OrderedJson scenario_report_to_json(const ScenarioReport& report);
std::string scenario_report_to_csv(const ScenarioReport& report);

}  // namespace bmox
