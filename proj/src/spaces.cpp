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

#include "bmox/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace bmox {

namespace {

constexpr double kRelTol = 1e-12;
constexpr int kMaxIter = 200;

double safe_log1p(double x) { return std::log1p(x); }

}  // namespace

OrliczFunction OrliczFunction::power(double p) {
  if (!(p > 0.0)) throw std::domain_error("OrliczFunction::power: p must be > 0");
  return OrliczFunction(
      Tag::Power, "power:" + std::to_string(p),
      [p](double t) { return std::pow(t, p); },
      std::function<double(double)>([p](double u) { return std::pow(u, 1.0 / p); }),
      p >= 1.0);
}

OrliczFunction OrliczFunction::exp_l() {
  return OrliczFunction(
      Tag::ExpL, "expL", [](double t) { return std::expm1(t); },
      std::function<double(double)>([](double u) { return safe_log1p(u); }), true);
}

OrliczFunction OrliczFunction::power_log(double p, double alpha) {
  if (!(p >= 1.0) || !(alpha > 0.0))
    throw std::domain_error("OrliczFunction::power_log: need p >= 1, alpha > 0");
  auto phi = [p, alpha](double t) {
    if (t <= 0.0) return 0.0;
    double lg = t > 1.0 ? std::log(t) : 0.0;
    return std::pow(t, p) * std::pow(1.0 + lg, alpha);
  };
  return OrliczFunction(Tag::PowerLog,
                        "power_log:" + std::to_string(p) + "," + std::to_string(alpha),
                        phi, std::nullopt, true);
}

OrliczFunction OrliczFunction::custom(std::string name,
                                      std::function<double(double)> phi,
                                      bool convex) {
  return OrliczFunction(Tag::Custom, std::move(name), std::move(phi), std::nullopt,
                        convex);
}

double OrliczFunction::inverse(double u) const {
  if (!(u > 0.0)) throw std::domain_error("OrliczFunction::inverse: u must be > 0");
  if (inverse_) return (*inverse_)(u);
  // Bisection on the forward map.
  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (phi_(hi) < u) {
    hi *= 2.0;
    if (++guard > 2000) throw std::runtime_error("OrliczFunction::inverse: no upper bracket");
  }
  guard = 0;
  while (phi_(lo) > u) {
    lo *= 0.5;
    if (++guard > 2000) throw std::runtime_error("OrliczFunction::inverse: no lower bracket");
  }
  for (int i = 0; i < kMaxIter && (hi - lo) > kRelTol * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (phi_(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void OrliczFunction::validate() const {
  if (phi_(0.0) != 0.0) throw std::domain_error("Orlicz: phi(0) != 0");
  double prev = 0.0;
  for (double t = 1e-6; t <= 1e6; t *= 4.0) {
    double v = phi_(t);
    if (!(v >= prev)) throw std::domain_error("Orlicz: phi not non-decreasing");
    prev = v;
  }
  if (!(prev > 1e3)) throw std::domain_error("Orlicz: phi does not grow to infinity");
}

ExponentField::ExponentField(GridFunction p) : p_(std::move(p)) {
  pmin_ = p_.values().minCoeff();
  pmax_ = p_.values().maxCoeff();
  if (!(pmin_ >= 1.0) || !std::isfinite(pmax_))
    throw std::domain_error("ExponentField: need 1 <= p- <= p+ < inf");
}

Weight::Weight(GridFunction w) : w_(std::move(w)) {
  if (!(w_.values() > 0.0).all())
    throw std::domain_error("Weight: values must be strictly positive");
}

double Weight::mass(const GridCube& Q) const {
  require_same_grid(w_, Q);
  double s = 0.0;
  Q.for_each_cell([&](std::int64_t i) { s += w_[i]; });
  return s * Q.grid()->cell_measure();
}

bool SpaceSpec::convex_in_shift() const {
  if (auto* lp = get_if<LpSpace>()) return lp->p >= 1.0;
  if (auto* o = get_if<OrliczSpace>()) return o->phi.convex();
  return true;  // weighted L1 and variable exponent (p >= 1) are convex
}

std::string SpaceSpec::describe() const {
  if (auto* lp = get_if<LpSpace>()) return "lp:" + std::to_string(lp->p);
  if (get_if<WeightedL1Space>()) return "weighted_l1";
  if (auto* o = get_if<OrliczSpace>()) return "orlicz:" + o->phi.name();
  return "varexp";
}

namespace {

// Averaged Orlicz modular |Q|^{-1} int_Q phi(|f|/alpha); overflow counts as
// "greater than one".
double orlicz_modular(const OrliczFunction& phi, const GridFunction& f,
                      const GridCube& Q, double alpha) {
  double sum = 0.0;
  bool blown = false;
  Q.for_each_cell([&](std::int64_t i) {
    if (blown) return;
    double v = phi(std::abs(f[i]) / alpha);
    if (!std::isfinite(v)) {
      blown = true;
      return;
    }
    sum += v;
  });
  if (blown) return std::numeric_limits<double>::infinity();
  return sum / static_cast<double>(Q.cell_count());
}

// Decreasing-in-alpha modular bisection shared by the Orlicz and variable
// exponent solvers. Returns the upper bracket end, so the modular constraint
// is satisfied at the returned value.
template <typename Modular>
double modular_bisect(Modular&& modular, double alpha0, const char* what) {
  double hi = alpha0;
  int guard = 0;
  while (!(modular(hi) <= 1.0)) {
    hi *= 2.0;
    if (++guard > 400) throw std::runtime_error(std::string(what) + ": no upper bracket");
  }
  double lo = hi * 0.5;
  guard = 0;
  while (modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 400) {
      // Modular stays <= 1 arbitrarily close to zero; the norm is zero.
      return 0.0;
    }
  }
  for (int i = 0; i < kMaxIter && (hi - lo) > kRelTol * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (modular(mid) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

double luxemburg_solve(const OrliczFunction& phi, const GridFunction& f,
                       const GridCube& Q) {
  require_same_grid(f, Q);
  double maxabs = 0.0;
  Q.for_each_cell([&](std::int64_t i) { maxabs = std::max(maxabs, std::abs(f[i])); });
  if (maxabs == 0.0) return 0.0;
  double alpha0 = maxabs / phi.inverse(1.0);
  return modular_bisect(
      [&](double a) { return orlicz_modular(phi, f, Q, a); }, alpha0,
      "luxemburg_solve");
}

double varexp_norm_unnormalized(const ExponentField& p, const GridFunction& f,
                                const GridCube& Q) {
  require_same_grid(f, Q);
  require_same_grid(p.values(), Q);
  double maxabs = 0.0;
  Q.for_each_cell([&](std::int64_t i) { maxabs = std::max(maxabs, std::abs(f[i])); });
  if (maxabs == 0.0) return 0.0;
  double mu = Q.grid()->cell_measure();
  auto modular = [&](double lambda) {
    double sum = 0.0;
    Q.for_each_cell([&](std::int64_t i) {
      double a = std::abs(f[i]);
      if (a > 0.0) sum += std::pow(a / lambda, p.values()[i]);
    });
    return sum * mu;
  };
  return modular_bisect(modular, maxabs, "varexp_norm");
}

double local_norm(const SpaceSpec& space, const GridFunction& f, const GridCube& Q) {
  require_same_grid(f, Q);
  if (auto* lp = space.get_if<LpSpace>()) {
    double p = lp->p;
    double sum = 0.0;
    Q.for_each_cell([&](std::int64_t i) { sum += std::pow(std::abs(f[i]), p); });
    return std::pow(sum / static_cast<double>(Q.cell_count()), 1.0 / p);
  }
  if (auto* wl = space.get_if<WeightedL1Space>()) {
    const auto& w = wl->weight.values();
    require_same_grid(w, Q);
    double num = 0.0, den = 0.0;
    Q.for_each_cell([&](std::int64_t i) {
      num += std::abs(f[i]) * w[i];
      den += w[i];
    });
    return num / den;
  }
  if (auto* o = space.get_if<OrliczSpace>()) return luxemburg_solve(o->phi, f, Q);
  const auto& ve = std::get<VarExpSpace>(space.variant());
  double num = varexp_norm_unnormalized(ve.exponent, f, Q);
  if (num == 0.0) return 0.0;
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(f.grid()->cell_count());
  Q.for_each_cell([&](std::int64_t i) { v[i] = 1.0; });
  double den = varexp_norm_unnormalized(ve.exponent, f.with_values(std::move(v)), Q);
  return num / den;
}

namespace {

// ||chi_E||_{X_Q} when only the relative measure s = |E|/|Q| matters.
double ri_indicator_norm(const SpaceSpec& space, double s) {
  if (auto* lp = space.get_if<LpSpace>()) return std::pow(s, 1.0 / lp->p);
  const auto& phi = std::get<OrliczSpace>(space.variant()).phi;
  return 1.0 / phi.inverse(1.0 / s);
}

std::vector<std::int64_t> distinct_cube_cell_counts(const DyadicGrid& grid,
                                                    EnumeratePolicy policy) {
  std::vector<std::int64_t> out;
  std::int64_t m = grid.cells_per_axis();
  if (policy == EnumeratePolicy::All) {
    for (std::int64_t k = 1; k <= m; ++k)
      out.push_back(grid.dimension() == 1 ? k : k * k);
  } else {
    for (std::int64_t k = 1; k <= m; k *= 2)
      out.push_back(grid.dimension() == 1 ? k : k * k);
  }
  return out;
}

// Indicator norm for an explicit cell subset of Q (given as linear indices).
double subset_indicator_norm(const SpaceSpec& space, const GridPtr& grid,
                             const GridCube& Q, const std::vector<std::int64_t>& cells) {
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid->cell_count());
  for (auto i : cells) v[i] = 1.0;
  return local_norm(space, GridFunction(grid, std::move(v)), Q);
}

// Adversarial subset search for the variable exponent family: candidate cell
// orders by exponent, plus a bounded swap refinement.
double varexp_extremal_subset(const SpaceSpec& space, const GridPtr& grid,
                              const GridCube& Q, std::int64_t n, bool maximize,
                              int swap_budget) {
  const auto& p = std::get<VarExpSpace>(space.variant()).exponent.values();
  std::vector<std::int64_t> cells;
  cells.reserve(static_cast<std::size_t>(Q.cell_count()));
  Q.for_each_cell([&](std::int64_t i) { cells.push_back(i); });
  std::vector<std::int64_t> asc = cells;
  std::stable_sort(asc.begin(), asc.end(),
                   [&](std::int64_t a, std::int64_t b) { return p[a] < p[b]; });
  std::vector<std::int64_t> desc(asc.rbegin(), asc.rend());

  auto eval = [&](const std::vector<std::int64_t>& order) {
    std::vector<std::int64_t> chosen(order.begin(), order.begin() + n);
    double best = subset_indicator_norm(space, grid, Q, chosen);
    // Swap refinement between the boundary of the chosen set and the rest.
    for (int s = 0; s < swap_budget; ++s) {
      bool improved = false;
      for (std::int64_t j = 0; j < std::min<std::int64_t>(4, n); ++j) {
        std::int64_t out_pos = n - 1 - j;
        std::int64_t in_pos = n + s;
        if (in_pos >= static_cast<std::int64_t>(order.size())) break;
        std::vector<std::int64_t> trial = chosen;
        trial[static_cast<std::size_t>(out_pos)] = order[static_cast<std::size_t>(in_pos)];
        double v = subset_indicator_norm(space, grid, Q, trial);
        if (maximize ? v > best : v < best) {
          best = v;
          chosen = trial;
          improved = true;
        }
      }
      if (!improved) break;
    }
    return best;
  };

  double a = eval(asc), d = eval(desc);
  return maximize ? std::max(a, d) : std::min(a, d);
}

}  // namespace

std::pair<double, double> normalization_check(const SpaceSpec& space,
                                              const GridPtr& grid,
                                              EnumeratePolicy policy) {
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (const auto& Q : enumerate_cubes(grid, policy)) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(grid->cell_count());
    Q.for_each_cell([&](std::int64_t i) { v[i] = 1.0; });
    double nrm = local_norm(space, GridFunction(grid, std::move(v)), Q);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw std::runtime_error("normalization_check: degenerate indicator norm");
    mn = std::min(mn, nrm);
    mx = std::max(mx, nrm);
  }
  return {mn, mx};
}

double a_delta_margin(const SpaceSpec& space, const GridPtr& grid, double delta,
                      EnumeratePolicy policy) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("a_delta_margin: delta must be in (0,1)");
  double margin = std::numeric_limits<double>::infinity();

  if (space.rearrangement_invariant()) {
    for (auto N : distinct_cube_cell_counts(*grid, policy)) {
      auto n = static_cast<std::int64_t>(
          std::ceil(delta * static_cast<double>(N) - 1e-12));
      n = std::max<std::int64_t>(n, 1);
      margin = std::min(margin,
                        ri_indicator_norm(space, static_cast<double>(n) /
                                                     static_cast<double>(N)));
    }
    return margin;
  }

  for (const auto& Q : enumerate_cubes(grid, policy)) {
    std::int64_t N = Q.cell_count();
    auto n = static_cast<std::int64_t>(
        std::ceil(delta * static_cast<double>(N) - 1e-12));
    n = std::max<std::int64_t>(n, 1);
    if (auto* wl = space.get_if<WeightedL1Space>()) {
      // Separable objective: the adversary takes the n smallest weights.
      const auto& w = wl->weight.values();
      std::vector<double> ws;
      ws.reserve(static_cast<std::size_t>(N));
      double total = 0.0;
      Q.for_each_cell([&](std::int64_t i) {
        ws.push_back(w[i]);
        total += w[i];
      });
      std::nth_element(ws.begin(), ws.begin() + n, ws.end());
      double sel = std::accumulate(ws.begin(), ws.begin() + n, 0.0);
      margin = std::min(margin, sel / total);
    } else {
      margin = std::min(margin, varexp_extremal_subset(space, grid, Q, n,
                                                       /*maximize=*/false, 4));
    }
  }
  return margin;
}

double psi_pointwise(const SpaceSpec& space, const GridPtr& grid, double t,
                     EnumeratePolicy policy) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("psi_pointwise: t must be in (0,1)");
  double best = 0.0;

  if (space.rearrangement_invariant()) {
    double s_max = 0.0;
    for (auto N : distinct_cube_cell_counts(*grid, policy)) {
      auto n = static_cast<std::int64_t>(
          std::floor(t * static_cast<double>(N) + 1e-12));
      if (n < 1) continue;
      s_max = std::max(s_max, static_cast<double>(n) / static_cast<double>(N));
    }
    return s_max > 0.0 ? ri_indicator_norm(space, s_max) : 0.0;
  }

  bool is_root_done = false;
  for (const auto& Q : enumerate_cubes(grid, policy)) {
    std::int64_t N = Q.cell_count();
    auto n =
        static_cast<std::int64_t>(std::floor(t * static_cast<double>(N) + 1e-12));
    if (n < 1) continue;
    if (auto* wl = space.get_if<WeightedL1Space>()) {
      const auto& w = wl->weight.values();
      std::vector<double> ws;
      ws.reserve(static_cast<std::size_t>(N));
      double total = 0.0;
      Q.for_each_cell([&](std::int64_t i) {
        ws.push_back(w[i]);
        total += w[i];
      });
      std::nth_element(ws.begin(), ws.begin() + n, ws.end(), std::greater<double>());
      double sel = std::accumulate(ws.begin(), ws.begin() + n, 0.0);
      best = std::max(best, sel / total);
    } else {
      // Swap refinement only on the largest cube; elsewhere the sorted
      // candidates are kept as the (lower bound) adversary.
      int budget = is_root_done ? 0 : 4;
      is_root_done = true;
      best = std::max(best, varexp_extremal_subset(space, grid, Q, n,
                                                   /*maximize=*/true, budget));
    }
  }
  return best;
}

double psi_dyadic_integral(const SpaceSpec& space, const GridPtr& grid, int K,
                           EnumeratePolicy policy) {
  if (K < 1) throw std::domain_error("psi_dyadic_integral: K must be >= 1");
  double sum = 0.0;
  for (int k = 1; k <= K; ++k)
    sum += psi_pointwise(space, grid, std::ldexp(1.0, -k), policy);
  return 3.0 * sum;
}

double fundamental_function(const SpaceSpec& space, const GridPtr& grid, double t) {
  if (!space.rearrangement_invariant())
    throw std::domain_error(
        "fundamental_function: requires a rearrangement invariant variant");
  double root = grid->dimension() == 1 ? grid->side() : grid->side() * grid->side();
  if (!(t > 0.0) || t > root * (1.0 + 1e-12))
    throw std::domain_error("fundamental_function: t must be in (0, |root|]");
  if (auto* lp = space.get_if<LpSpace>()) return std::pow(t, 1.0 / lp->p);
  const auto& phi = std::get<OrliczSpace>(space.variant()).phi;
  return 1.0 / phi.inverse(root / t);
}

}  // namespace bmox
