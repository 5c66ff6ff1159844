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

#include "bmox/bmo.hpp"

#include "bmox/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bmox {

namespace {

constexpr double kShiftTol = 1e-9;
constexpr std::size_t kRetainCap = 256;

template <typename Eval>
OscillationReport run_sup(const std::vector<GridCube>& cubes, Eval&& eval,
                          int jobs, bool retain) {
  OscillationReport report;
  if (cubes.empty()) return report;
  std::vector<double> values;
  if (retain) values.assign(cubes.size(), 0.0);
  auto [best, idx] = parallel_argmax(
      cubes.size(),
      [&](std::size_t i) {
        double v = eval(cubes[i]);
        if (retain) values[i] = v;
        return v;
      },
      jobs);
  report.norm = best;
  report.argmax = cubes[idx];
  if (retain) {
    std::size_t n = std::min(cubes.size(), kRetainCap);
    report.per_cube.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      report.per_cube.emplace_back(cubes[i], values[i]);
  }
  return report;
}

std::pair<double, double> value_range(const GridFunction& f, const GridCube& Q) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  Q.for_each_cell([&](std::int64_t i) {
    lo = std::min(lo, f[i]);
    hi = std::max(hi, f[i]);
  });
  return {lo, hi};
}

double golden_min(const std::function<double(double)>& obj, double a, double b,
                  double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = std::min(obj(a), obj(b));
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = obj(x1), f2 = obj(x2);
  best = std::min({best, f1, f2});
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = obj(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = obj(x2);
    }
    best = std::min({best, f1, f2});
  }
  return best;
}

}  // namespace

std::vector<GridCube> policy_cubes(const GridPtr& grid, const CubePolicy& policy) {
  switch (policy.kind) {
    case CubePolicy::Kind::All:
      return enumerate_cubes(grid, EnumeratePolicy::All);
    case CubePolicy::Kind::DyadicOnly:
      return enumerate_cubes(grid, EnumeratePolicy::Dyadic);
    case CubePolicy::Kind::MaxSide: {
      if (policy.side_cap < 1)
        throw std::domain_error("CubePolicy: max_side cap must be >= 1");
      auto all = enumerate_cubes(grid, EnumeratePolicy::All);
      std::vector<GridCube> kept;
      for (auto& Q : all)
        if (Q.size_cells() <= policy.side_cap) kept.push_back(Q);
      return kept;
    }
  }
  throw std::logic_error("CubePolicy: unknown kind");
}

OscillationReport bmo_norm(const GridFunction& f, const CubePolicy& policy,
                           int jobs, bool retain_per_cube) {
  auto cubes = policy_cubes(f.grid(), policy);
  return run_sup(
      cubes,
      [&](const GridCube& Q) { return mean_deviation(f, Q, average(f, Q)); },
      jobs, retain_per_cube);
}

OscillationReport bmo_x_norm(const GridFunction& f, const SpaceSpec& space,
                             const CubePolicy& policy, int jobs,
                             bool retain_per_cube) {
  auto cubes = policy_cubes(f.grid(), policy);
  return run_sup(
      cubes,
      [&](const GridCube& Q) {
        double c = average(f, Q);
        return local_norm(space, f.with_values(f.values() - c), Q);
      },
      jobs, retain_per_cube);
}

OscillationReport bmo_x_star_norm(const GridFunction& f, const SpaceSpec& space,
                                  const CubePolicy& policy, int jobs,
                                  bool retain_per_cube) {
  auto cubes = policy_cubes(f.grid(), policy);
  bool convex = space.convex_in_shift();
  auto report = run_sup(
      cubes,
      [&](const GridCube& Q) {
        auto [lo, hi] = value_range(f, Q);
        if (hi - lo <= 0.0) return 0.0;
        std::function<double(double)> obj = [&](double c) {
          return local_norm(space, f.with_values(f.values() - c), Q);
        };
        if (convex) return golden_min(obj, lo, hi, kShiftTol);
        // Quasi-norm path: coarse scan, then local refinement around the
        // best sample. Upper bound only.
        const int n = 257;
        double best = std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i < n; ++i) {
          double c = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
          double v = obj(c);
          if (v < best) {
            best = v;
            best_i = i;
          }
        }
        double step = (hi - lo) / (n - 1);
        double a = std::max(lo, lo + step * (best_i - 1));
        double b = std::min(hi, lo + step * (best_i + 1));
        return std::min(best, golden_min(obj, a, b, kShiftTol));
      },
      jobs, retain_per_cube);
  report.upper_bound = !convex;
  return report;
}

OscillationReport bmo_mx_norm(const GridFunction& f, const SpaceSpec& space,
                              int jobs, bool retain_per_cube) {
  auto cubes = policy_cubes(f.grid(), CubePolicy::dyadic());
  return run_sup(
      cubes,
      [&](const GridCube& Q) {
        double c = average(f, Q);
        Eigen::ArrayXd g = Eigen::ArrayXd::Zero(f.size());
        Q.for_each_cell([&](std::int64_t i) { g[i] = f[i] - c; });
        GridFunction m = maximal_dyadic_local(f.with_values(std::move(g)), Q);
        return local_norm(space, m, Q);
      },
      jobs, retain_per_cube);
}

OscillationReport median_oscillation_norm(const GridFunction& f,
                                          const CubePolicy& policy, int jobs,
                                          bool retain_per_cube) {
  auto cubes = policy_cubes(f.grid(), policy);
  return run_sup(
      cubes,
      [&](const GridCube& Q) {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(Q.cell_count()));
        Q.for_each_cell([&](std::int64_t i) { v.push_back(f[i]); });
        std::sort(v.begin(), v.end());
        std::size_t n = v.size();
        // Left-continuous value at |Q|/2 is the k-th largest deviation,
        // k = ceil(n/2); minimizing over c gives the narrowest window
        // holding m = n - k + 1 consecutive sorted values.
        std::size_t k = (n + 1) / 2;
        std::size_t m = n - k + 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + m <= n; ++i)
          best = std::min(best, (v[i + m - 1] - v[i]) / 2.0);
        return best;
      },
      jobs, retain_per_cube);
}

JnDecayResult jn_decay_check(const GridFunction& f, const GridCube& Q,
                             double c_target) {
  require_same_grid(f, Q);
  double norm = bmo_norm(f, CubePolicy::dyadic()).norm;
  if (!(norm > 0.0))
    throw std::domain_error("jn_decay_check: zero oscillation norm");

  double c = average(f, Q);
  GridFunction g = f.with_values((f.values() - c).abs());
  double maxdev = 0.0;
  Q.for_each_cell([&](std::int64_t i) { maxdev = std::max(maxdev, g[i]); });
  double measure_q = Q.measure();

  const int grid_n = 128;
  std::vector<double> alphas;
  for (int j = 1; j <= grid_n; ++j)
    alphas.push_back(maxdev * static_cast<double>(j) / grid_n);

  auto holds = [&](double C) {
    for (double a : alphas) {
      double lhs = distribution_measure(g, Q, a);
      if (lhs > 2.0 * measure_q * std::exp(-C * a / norm)) return false;
    }
    return true;
  };

  double best;
  if (maxdev <= 0.0 || holds(1e12)) {
    best = std::numeric_limits<double>::infinity();
  } else {
    double lo = 0.0, hi = 1.0;
    while (holds(hi)) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    best = lo;
  }
  return {holds(c_target), best};
}

double abs_mapping_ratio(const GridFunction& f, const SpaceSpec& space,
                         const CubePolicy& policy) {
  double denom = bmo_x_norm(f, space, policy).norm;
  if (!(denom > 0.0))
    throw std::domain_error("abs_mapping_ratio: zero oscillation norm");
  double num = bmo_x_norm(f.with_values(f.values().abs()), space, policy).norm;
  return num / denom;
}

}  // namespace bmox
