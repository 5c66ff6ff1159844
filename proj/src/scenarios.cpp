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

#include "bmox/scenarios.hpp"

#include "bmox/bmo.hpp"
#include "bmox/corpus.hpp"
#include "bmox/criteria.hpp"
#include "bmox/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bmox {

namespace {

/// inf_c sum w|f-c| / sum w over the cube, attained at the weighted median.
double weighted_median_oscillation(const GridFunction& f, const Eigen::ArrayXd& w,
                                   const GridCube& Q) {
  std::vector<std::pair<double, double>> vw;
  vw.reserve(static_cast<std::size_t>(Q.cell_count()));
  double total = 0.0;
  Q.for_each_cell([&](std::int64_t i) {
    vw.emplace_back(f[i], w[i]);
    total += w[i];
  });
  std::sort(vw.begin(), vw.end());
  double cum = 0.0, c = vw.back().first;
  for (const auto& [v, wt] : vw) {
    cum += wt;
    if (cum >= total / 2.0) {
      c = v;
      break;
    }
  }
  double num = 0.0;
  for (const auto& [v, wt] : vw) num += std::abs(v - c) * wt;
  return num / total;
}

double smoothstep5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

}  // namespace

ScenarioReport run_exp_weight(const std::vector<double>& l_values, int depth,
                              int jobs) {
  if (!std::is_sorted(l_values.begin(), l_values.end()))
    throw std::domain_error("run_exp_weight: L values must be increasing");
  ScenarioReport report;
  report.id = "exp-weight";
  report.parameters = {{"depth", static_cast<double>(depth)}};
  report.tolerances = {{"classical_linear_rel", 0.05},
                       {"star_ceiling", 2.0},
                       {"star_increment", 1e-3}};

  std::vector<double> classical, star;
  for (double L : l_values) {
    auto grid = std::make_shared<DyadicGrid>(1, std::array<double, 2>{0.0, 0.0},
                                             L, depth);
    GridFunction f = builtin_coordinate(grid);
    Eigen::ArrayXd w(grid->cell_count());
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      w[i] = std::exp(grid->cell_center(i)[0]);

    double c = bmo_norm(f, CubePolicy::dyadic(), jobs).norm;
    double s = 0.0;
    for (const auto& Q : enumerate_cubes(grid, EnumeratePolicy::Dyadic))
      s = std::max(s, weighted_median_oscillation(f, w, Q));
    classical.push_back(c);
    star.push_back(s);
    report.table.push_back({L, {{"classical", c}, {"star", s}}});
  }

  bool linear = true, bounded = true, plateaus = true;
  for (std::size_t i = 0; i < l_values.size(); ++i) {
    if (std::abs(classical[i] - l_values[i] / 4.0) > 0.05 * l_values[i])
      linear = false;
    if (star[i] > 2.0) bounded = false;
    if (i > 0 && l_values[i - 1] >= 16.0 &&
        std::abs(star[i] - star[i - 1]) >= 1e-3)
      plateaus = false;
  }
  report.verdicts = {{"classical_grows_linearly", linear},
                     {"star_bounded", bounded},
                     {"star_plateaus", plateaus}};
  return report;
}

ScenarioReport run_varexp(double eps, double delta, double rho,
                          const std::vector<int>& m_values, int depth_per_unit) {
  if (!(0.0 < eps && eps < delta && delta < 1.0 && rho > 1.0 && rho * eps < delta))
    throw std::domain_error("run_varexp: need 0 < eps < delta < 1, rho > 1, rho*eps < delta");
  if (depth_per_unit < 1)
    throw std::domain_error("run_varexp: depth_per_unit must be >= 1");

  ScenarioReport report;
  report.id = "varexp";
  report.parameters = {{"eps", eps},
                       {"delta", delta},
                       {"rho", rho},
                       {"depth_per_unit", static_cast<double>(depth_per_unit)}};
  report.tolerances = {{"closed_form_rel", 1e-6},
                       {"margin_floor", 0.05},
                       {"psi_sqrt_factor", 3.0}};

  double base = eps / 2.0;
  bool forms_ok = true, margin_ok = true, psi_ok = true;
  std::vector<double> ratios;

  for (int m : m_values) {
    if (m < 1) throw std::domain_error("run_varexp: m must be >= 1");
    int s = 0;
    while (base * std::ldexp(1.0, s) < static_cast<double>(m)) ++s;
    double side = base * std::ldexp(1.0, s);
    int depth = s + depth_per_unit;
    auto grid = std::make_shared<DyadicGrid>(1, std::array<double, 2>{base, 0.0},
                                             side, depth);
    std::int64_t n = grid->cell_count();
    double width = side / static_cast<double>(n);

    Eigen::ArrayXd pv(n);
    for (std::int64_t i = 0; i < n; ++i) {
      double x = grid->cell_center(i)[0];
      auto k = static_cast<int>(std::llround(x));
      double bump = 0.0;
      if (k >= 1 && k <= m) {
        double d = std::abs(x - static_cast<double>(k));
        if (d <= eps / 2.0)
          bump = 1.0;
        else if (d < rho * eps / 2.0)
          bump = smoothstep5((rho * eps / 2.0 - d) / ((rho - 1.0) * eps / 2.0));
      }
      pv[i] = 1.0 + bump;
    }
    ExponentField exponent(GridFunction(grid, std::move(pv)));
    SpaceSpec space = SpaceSpec::varexp(exponent);
    GridCube root = GridCube::root(grid);

    auto fill_range = [&](Eigen::ArrayXd& v, double rel_lo, double rel_hi) {
      auto i0 = std::llround(rel_lo / width);
      auto i1 = std::llround(rel_hi / width);
      for (std::int64_t i = i0; i < i1; ++i) v[i] = 1.0;
    };
    Eigen::ArrayXd chi_e = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd chi_f = Eigen::ArrayXd::Zero(n);
    for (int k = 1; k <= m; ++k) {
      fill_range(chi_e, k - eps, static_cast<double>(k));
      fill_range(chi_f, k + (rho - 1.0) * eps / 2.0,
                 k + 1.0 - (rho + 1.0) * eps / 2.0);
    }
    Eigen::ArrayXd chi_i = Eigen::ArrayXd::Zero(n);
    fill_range(chi_i, 0.0, static_cast<double>(m));

    double norm_e =
        varexp_norm_unnormalized(exponent, GridFunction(grid, chi_e), root);
    double norm_f =
        varexp_norm_unnormalized(exponent, GridFunction(grid, chi_f), root);
    double norm_i =
        varexp_norm_unnormalized(exponent, GridFunction(grid, chi_i), root);
    double expect_e = std::sqrt(eps * static_cast<double>(m));
    double expect_f = (1.0 - rho * eps) * static_cast<double>(m);
    if (std::abs(norm_e - expect_e) > 1e-6 * expect_e) forms_ok = false;
    if (std::abs(norm_f - expect_f) > 1e-6 * expect_f) forms_ok = false;
    double ratio = norm_e / norm_i;
    ratios.push_back(ratio);

    double margin = a_delta_margin(space, grid, delta, EnumeratePolicy::Dyadic);
    if (margin < 0.05) margin_ok = false;

    double psi_worst = 0.0;
    for (int k = 1; k <= 12; ++k) {
      double t = std::ldexp(1.0, -k);
      double psi = psi_pointwise(space, grid, t, EnumeratePolicy::Dyadic);
      psi_worst = std::max(psi_worst, psi / std::sqrt(t));
      if (psi > 3.0 * std::sqrt(t)) psi_ok = false;
    }

    report.table.push_back({static_cast<double>(m),
                            {{"chi_e_norm", norm_e},
                             {"chi_e_expected", expect_e},
                             {"chi_f_norm", norm_f},
                             {"chi_f_expected", expect_f},
                             {"small_exponent_ratio", ratio},
                             {"delta_margin", margin},
                             {"psi_sqrt_ratio_max", psi_worst}}});
  }

  bool ratio_decays =
      ratios.size() >= 2 && ratios.back() < 0.5 * ratios.front();
  report.verdicts = {{"closed_forms", forms_ok},
                     {"delta_margin_floor", margin_ok},
                     {"small_exponent_ratio_decays", ratio_decays},
                     {"psi_sqrt_bound", psi_ok}};
  return report;
}

ScenarioReport run_orlicz_scaling(const std::vector<std::pair<double, double>>& pairs,
                                  int k_terms) {
  if (k_terms < 1) throw std::domain_error("run_orlicz_scaling: k_terms must be >= 1");
  ScenarioReport report;
  report.id = "orlicz-scaling";
  report.parameters = {{"k_terms", static_cast<double>(k_terms)}};
  report.tolerances = {{"band_low", 1.0 / 6.0},
                       {"band_high", 6.0},
                       {"stability_rel", 0.05}};

  int depth = std::min(k_terms, 20);
  auto grid =
      std::make_shared<DyadicGrid>(1, std::array<double, 2>{0.0, 0.0}, 1.0, depth);

  bool band_ok = true, stable_ok = true;
  for (auto [p, alpha] : pairs) {
    if (!(p >= 1.0 && alpha > 0.0))
      throw std::domain_error("run_orlicz_scaling: need p >= 1, alpha > 0");
    OrliczFunction phi = OrliczFunction::power_log(p, alpha);
    SpaceSpec space = SpaceSpec::orlicz(phi);
    double integral =
        psi_dyadic_integral(space, grid, k_terms, EnumeratePolicy::Dyadic);
    double ratio = integral / (p + alpha);
    if (!(ratio >= 1.0 / 6.0 && ratio <= 6.0)) band_ok = false;

    // Grid-free tail check: the continuum psi is 1/phi^{-1}(1/t).
    auto cont = [&](int terms) {
      double sum = 0.0;
      for (int k = 1; k <= terms; ++k)
        sum += 1.0 / phi.inverse(std::ldexp(1.0, k));
      return 3.0 * sum;
    };
    double c1 = cont(std::max(k_terms, 16)), c2 = cont(2 * std::max(k_terms, 16));
    double drift = std::abs(c2 - c1) / c1;
    if (drift >= 0.05) stable_ok = false;

    report.table.push_back({p,
                            {{"alpha", alpha},
                             {"psi_integral", integral},
                             {"ratio_to_p_plus_alpha", ratio},
                             {"tail_drift", drift}}});
  }
  report.verdicts = {{"ratio_band", band_ok}, {"tail_stable", stable_ok}};
  return report;
}

ScenarioReport run_mw(const std::string& weight_tag, double a, int depth,
                      int jobs) {
  ScenarioReport report;
  report.id = "mw";
  report.parameters = {{"a", a}, {"depth", static_cast<double>(depth)}};
  report.tolerances = {{"mutual_ratio", 8.0}};

  auto grid =
      std::make_shared<DyadicGrid>(1, std::array<double, 2>{0.0, 0.0}, 1.0, depth);
  Eigen::ArrayXd wv(grid->cell_count());
  if (weight_tag == "const") {
    wv.setOnes();
  } else if (weight_tag == "power") {
    if (!(a > -0.5 && a < 0.5))
      throw std::domain_error("run_mw: power exponent must be in (-1/2, 1/2)");
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      wv[i] = std::pow(grid->cell_center(i)[0], a);
  } else if (weight_tag == "exp_local") {
    for (std::int64_t i = 0; i < grid->cell_count(); ++i)
      wv[i] = std::exp(grid->cell_center(i)[0]);
  } else {
    throw std::domain_error("run_mw: unknown weight tag '" + weight_tag + "'");
  }
  SpaceSpec space = SpaceSpec::weighted_l1(Weight(GridFunction(grid, wv)));

  double worst = 1.0;
  bool exact_const = true;
  auto corpus = bmo_corpus(grid);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    double classic = bmo_norm(corpus[i], CubePolicy::dyadic(), jobs).norm;
    double x = bmo_x_norm(corpus[i], space, CubePolicy::dyadic(), jobs).norm;
    double star = bmo_x_star_norm(corpus[i], space, CubePolicy::dyadic(), jobs).norm;
    double hi = std::max({classic, x, star});
    double lo = std::min({classic, x, star});
    if (lo > 0.0) worst = std::max(worst, hi / lo);
    if (weight_tag == "const" && x != classic) exact_const = false;
    report.table.push_back({static_cast<double>(i),
                            {{"classic", classic}, {"x", x}, {"star", star}}});
  }
  report.verdicts = {{"mutual_ratio_bounded", worst <= 8.0}};
  if (weight_tag == "const")
    report.verdicts.emplace_back("x_equals_classic_exactly", exact_const);
  return report;
}

}  // namespace bmox
