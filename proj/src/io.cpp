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

#include "bmox/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bmox {

namespace {

std::string header_field(const std::string& line, const std::string& key) {
  auto at = line.find(key + "=");
  if (at == std::string::npos)
    throw std::runtime_error("grid csv: missing header field '" + key + "'");
  at += key.size() + 1;
  auto end = line.find(' ', at);
  return line.substr(at, end == std::string::npos ? std::string::npos : end - at);
}

}  // namespace

GridFunction read_grid_function_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("# grid ", 0) != 0)
    throw std::runtime_error("grid csv: expected '# grid ...' header");
  int dim = std::stoi(header_field(header, "dim"));
  int depth = std::stoi(header_field(header, "depth"));
  double side = std::stod(header_field(header, "side"));
  std::string origin_field = header_field(header, "origin");
  std::array<double, 2> origin{0.0, 0.0};
  {
    std::stringstream ss(origin_field);
    std::string part;
    int a = 0;
    while (std::getline(ss, part, ',') && a < 2) origin[a++] = std::stod(part);
  }
  auto grid = std::make_shared<DyadicGrid>(dim, origin, side, depth);
  Eigen::ArrayXd v(grid->cell_count());
  std::string line;
  std::int64_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (i >= grid->cell_count())
      throw std::runtime_error("grid csv: too many values");
    v[i++] = std::stod(line);
  }
  if (i != grid->cell_count())
    throw std::runtime_error("grid csv: expected " +
                             std::to_string(grid->cell_count()) + " values, got " +
                             std::to_string(i));
  return GridFunction(grid, std::move(v));
}

GridFunction read_grid_function_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_grid_function_csv(in);
}

void write_grid_function_csv(const GridFunction& f, std::ostream& out) {
  const auto& g = *f.grid();
  out << "# grid dim=" << g.dimension() << " depth=" << g.depth() << " origin="
      << OrderedJson(g.origin()[0]).dump();
  if (g.dimension() == 2) out << "," << OrderedJson(g.origin()[1]).dump();
  out << " side=" << OrderedJson(g.side()).dump() << "\n";
  for (std::int64_t i = 0; i < f.size(); ++i)
    out << OrderedJson(f[i]).dump() << "\n";
}

namespace {

Weight weight_from_tag(const std::string& tag, const GridPtr& grid) {
  if (tag == "builtin:const") return Weight(GridFunction::constant(grid, 1.0));
  if (tag == "builtin:exp") {
    Eigen::ArrayXd v(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      v[i] = std::exp(grid->cell_center(i)[0]);
    return Weight(GridFunction(grid, std::move(v)));
  }
  GridFunction w = read_grid_function_csv_file(tag);
  if (!w.grid()->same_layout(*grid))
    throw std::runtime_error("weight grid layout does not match the function grid");
  return Weight(w.with_values(w.values()));
}

OrliczFunction phi_from_tag(const std::string& tag) {
  if (tag == "expL") return OrliczFunction::exp_l();
  if (tag.rfind("power_log:", 0) == 0) {
    auto rest = tag.substr(10);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("orlicz phi: power_log needs <p>,<alpha>");
    return OrliczFunction::power_log(std::stod(rest.substr(0, comma)),
                                     std::stod(rest.substr(comma + 1)));
  }
  if (tag.rfind("power:", 0) == 0)
    return OrliczFunction::power(std::stod(tag.substr(6)));
  throw std::runtime_error("orlicz phi: unknown tag '" + tag + "'");
}

ExponentField exponent_from_tag(const std::string& tag, const GridPtr& grid) {
  if (tag.rfind("builtin:bump:", 0) == 0) {
    auto rest = tag.substr(13);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("varexp exponent: bump needs <eps>,<rho>");
    double eps = std::stod(rest.substr(0, comma));
    double rho = std::stod(rest.substr(comma + 1));
    if (!(eps > 0.0 && rho > 1.0))
      throw std::runtime_error("varexp exponent: need eps > 0, rho > 1");
    Eigen::ArrayXd v(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i) {
      double x = grid->cell_center(i)[0];
      auto k = std::llround(x);
      double bump = 0.0;
      if (k >= 1) {
        double d = std::abs(x - static_cast<double>(k));
        if (d <= eps / 2.0) {
          bump = 1.0;
        } else if (d < rho * eps / 2.0) {
          double u = (rho * eps / 2.0 - d) / ((rho - 1.0) * eps / 2.0);
          bump = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
        }
      }
      v[i] = 1.0 + bump;
    }
    return ExponentField(GridFunction(grid, std::move(v)));
  }
  GridFunction p = read_grid_function_csv_file(tag);
  if (!p.grid()->same_layout(*grid))
    throw std::runtime_error("exponent grid layout does not match the function grid");
  return ExponentField(p);
}

}  // namespace

SpaceSpec parse_space_spec(const OrderedJson& j, const GridPtr& grid) {
  if (!j.is_object() || !j.contains("space"))
    throw std::runtime_error("space spec: expected an object with a 'space' key");
  std::string kind = j.at("space").get<std::string>();
  if (kind == "lp") return SpaceSpec::lp(j.at("p").get<double>());
  if (kind == "weighted_l1")
    return SpaceSpec::weighted_l1(
        weight_from_tag(j.at("weight").get<std::string>(), grid));
  if (kind == "orlicz")
    return SpaceSpec::orlicz(phi_from_tag(j.at("phi").get<std::string>()));
  if (kind == "varexp")
    return SpaceSpec::varexp(
        exponent_from_tag(j.at("exponent").get<std::string>(), grid));
  throw std::runtime_error("space spec: unknown space '" + kind + "'");
}

OrderedJson cube_to_json(const GridCube& Q) {
  OrderedJson j;
  j["corner"] = {Q.corner()[0], Q.corner()[1]};
  j["size"] = Q.size_cells();
  return j;
}

OrderedJson family_to_json(const SparseFamily& family) {
  OrderedJson j;
  j["root"] = cube_to_json(family.root());
  j["eta"] = family.eta_target();
  OrderedJson members = OrderedJson::array();
  for (std::size_t i = 0; i < family.members().size(); ++i) {
    const auto& P = family.members()[i];
    OrderedJson m;
    m["level"] = P.level();
    m["corner"] = {P.corner()[0], P.corner()[1]};
    m["exclusive_cells"] = family.exclusive_cells()[i];
    m["layer"] = family.layers()[i];
    members.push_back(std::move(m));
  }
  j["members"] = std::move(members);
  j["layer_union_cells"] = family.layer_union_cells();
  return j;
}

OrderedJson oscillation_report_to_json(const OscillationReport& report,
                                       const std::string& policy,
                                       const std::string& space) {
  OrderedJson j;
  j["norm"] = report.norm;
  if (report.argmax) j["argmax_cube"] = cube_to_json(*report.argmax);
  j["policy"] = policy;
  j["space"] = space;
  if (report.upper_bound) j["upper_bound"] = true;
  if (!report.per_cube.empty()) {
    OrderedJson rows = OrderedJson::array();
    for (const auto& [cube, value] : report.per_cube) {
      OrderedJson r;
      r["cube"] = cube_to_json(cube);
      r["value"] = value;
      rows.push_back(std::move(r));
    }
    j["per_cube"] = std::move(rows);
  }
  return j;
}

OrderedJson constants_report_to_json(const ConstantsReport& report) {
  OrderedJson j;
  j["semantics"] = "certified lower bounds";
  j["C1"] = report.c1;
  j["C2"] = report.c2;
  j["C3"] = report.c3;
  j["C4"] = report.c4;
  j["C1_corpus_index"] = report.c1_corpus_index;
  if (report.c2_family) j["C2_family"] = family_to_json(*report.c2_family);
  OrderedJson chain = OrderedJson::array();
  for (const auto& omega : report.c3_chain) chain.push_back(omega.size());
  j["C3_chain_sizes"] = std::move(chain);
  j["corpus"] = report.corpus_descriptor;
  return j;
}

OrderedJson ainfty_report_to_json(const AinftyReport& report) {
  OrderedJson j;
  j["fujii_wilson"] = report.fujii_wilson;
  j["sparse_sup"] = report.sparse_sup;
  if (report.witness) j["witness_family"] = family_to_json(*report.witness);
  return j;
}

OrderedJson scenario_report_to_json(const ScenarioReport& report) {
  OrderedJson j;
  j["scenario"] = report.id;
  OrderedJson params;
  for (const auto& [k, v] : report.parameters) params[k] = v;
  j["parameters"] = std::move(params);
  OrderedJson table = OrderedJson::array();
  for (const auto& row : report.table) {
    OrderedJson r;
    r["scale"] = row.scale;
    for (const auto& [k, v] : row.quantities) r[k] = v;
    table.push_back(std::move(r));
  }
  j["table"] = std::move(table);
  OrderedJson verdicts;
  for (const auto& [k, v] : report.verdicts) verdicts[k] = v;
  j["verdicts"] = std::move(verdicts);
  OrderedJson tol;
  for (const auto& [k, v] : report.tolerances) tol[k] = v;
  j["tolerances"] = std::move(tol);
  j["pass"] = report.all_verdicts_pass();
  return j;
}

std::string scenario_report_to_csv(const ScenarioReport& report) {
  std::ostringstream out;
  out << "scale";
  if (!report.table.empty())
    for (const auto& [k, v] : report.table.front().quantities) out << "," << k;
  out << "\n";
  for (const auto& row : report.table) {
    out << OrderedJson(row.scale).dump();
    for (const auto& [k, v] : row.quantities) out << "," << OrderedJson(v).dump();
    out << "\n";
  }
  return out.str();
}

}  // namespace bmox
