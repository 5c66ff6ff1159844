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

#include "bmox/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bmox {

StepRearrangement::StepRearrangement(std::vector<double> sorted_desc,
                                     double cell_measure)
    : values_(std::move(sorted_desc)), cell_measure_(cell_measure) {
  if (values_.empty()) throw std::domain_error("StepRearrangement: empty");
  if (!(cell_measure_ > 0.0))
    throw std::domain_error("StepRearrangement: nonpositive cell measure");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (values_[i] > values_[i - 1])
      throw std::domain_error("StepRearrangement: values not non-increasing");
}

double StepRearrangement::value_at(double t) const {
  if (!(t > 0.0)) throw std::domain_error("StepRearrangement: t must be > 0");
  if (t > total_measure()) return 0.0;
  // f*(t) = v_k for t in ((k-1)mu, k mu]; ceil with exact handling of the
  // right endpoints so that ties follow the left-continuous convention.
  double r = t / cell_measure_;
  auto k = static_cast<std::int64_t>(std::ceil(r - 1e-12));
  if (k < 1) k = 1;
  if (k > static_cast<std::int64_t>(values_.size()))
    k = static_cast<std::int64_t>(values_.size());
  return values_[static_cast<std::size_t>(k - 1)];
}

double StepRearrangement::distribution(double alpha) const {
  // values_ sorted descending: count of entries strictly above alpha.
  auto it = std::lower_bound(values_.begin(), values_.end(), alpha,
                             [](double v, double a) { return v > a; });
  auto count = static_cast<double>(std::distance(values_.begin(), it));
  return count * cell_measure_;
}

void require_same_grid(const GridFunction& f, const GridCube& Q) {
  if (!f.grid()->same_layout(*Q.grid()))
    throw std::domain_error("cube does not live on the function's grid");
}

double average(const GridFunction& f, const GridCube& Q) {
  require_same_grid(f, Q);
  double sum = 0.0;
  Q.for_each_cell([&](std::int64_t i) { sum += f[i]; });
  return sum / static_cast<double>(Q.cell_count());
}

double mean_deviation(const GridFunction& f, const GridCube& Q, double c) {
  require_same_grid(f, Q);
  double sum = 0.0;
  Q.for_each_cell([&](std::int64_t i) { sum += std::abs(f[i] - c); });
  return sum / static_cast<double>(Q.cell_count());
}

namespace {

double slope(std::int64_t a, double sa, std::int64_t b, double sb) {
  return (sb - sa) / static_cast<double>(b - a);
}

// Max slope from point (a, S[a]) to the upper hull (vertex indices in `hull`,
// increasing abscissa). The slope along the hull is unimodal.
double best_to_upper_hull(std::int64_t a, const std::vector<double>& S,
                          const std::vector<std::int64_t>& hull) {
  std::size_t lo = 0, hi = hull.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (slope(a, S[a], hull[mid + 1], S[hull[mid + 1]]) >=
        slope(a, S[a], hull[mid], S[hull[mid]]))
      lo = mid + 1;
    else
      hi = mid;
  }
  return slope(a, S[a], hull[lo], S[hull[lo]]);
}

// Max slope from the lower hull to point (b, S[b]).
double best_from_lower_hull(std::int64_t b, const std::vector<double>& S,
                            const std::vector<std::int64_t>& hull) {
  std::size_t lo = 0, hi = hull.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (slope(hull[mid + 1], S[hull[mid + 1]], b, S[b]) >=
        slope(hull[mid], S[hull[mid]], b, S[b]))
      lo = mid + 1;
    else
      hi = mid;
  }
  return slope(hull[lo], S[hull[lo]], b, S[b]);
}

double cross(std::int64_t x0, double y0, std::int64_t x1, double y1,
             std::int64_t x2, double y2) {
  return static_cast<double>(x1 - x0) * (y2 - y0) -
         static_cast<double>(x2 - x0) * (y1 - y0);
}

// For each cell i in [lo, hi): max average of v over subintervals of [lo, hi)
// containing i, folded into out[i]. Intervals are [a, b) over prefix sums S.
void max_avg_recurse(const std::vector<double>& S, std::int64_t lo, std::int64_t hi,
                     std::vector<double>& out) {
  if (hi - lo == 1) {
    out[lo] = std::max(out[lo], S[lo + 1] - S[lo]);
    return;
  }
  std::int64_t mid = (lo + hi) / 2;

  // Crossing intervals, left cells: a in [lo, i], b in (mid, hi].
  {
    std::vector<std::int64_t> upper;  // upper hull of (b, S[b]), b in mid+1..hi
    for (std::int64_t b = mid + 1; b <= hi; ++b) {
      while (upper.size() >= 2 &&
             cross(upper[upper.size() - 2], S[upper[upper.size() - 2]],
                   upper.back(), S[upper.back()], b, S[b]) >= 0)
        upper.pop_back();
      upper.push_back(b);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = lo; i < mid; ++i) {
      best = std::max(best, best_to_upper_hull(i, S, upper));
      out[i] = std::max(out[i], best);
    }
  }

  // Crossing intervals, right cells: a in [lo, mid-1], b in [i+1, hi].
  {
    std::vector<std::int64_t> lower;  // lower hull of (a, S[a]), a in lo..mid-1
    for (std::int64_t a = lo; a < mid; ++a) {
      while (lower.size() >= 2 &&
             cross(lower[lower.size() - 2], S[lower[lower.size() - 2]],
                   lower.back(), S[lower.back()], a, S[a]) <= 0)
        lower.pop_back();
      lower.push_back(a);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = hi - 1; i >= mid; --i) {
      best = std::max(best, best_from_lower_hull(i + 1, S, lower));
      out[i] = std::max(out[i], best);
    }
  }

  max_avg_recurse(S, lo, mid, out);
  max_avg_recurse(S, mid, hi, out);
}

}  // namespace

GridFunction maximal_all_cubes(const GridFunction& f) {
  const auto& grid = *f.grid();
  std::int64_t n = f.size();
  if (grid.dimension() == 1) {
    std::vector<double> S(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i) S[i + 1] = S[i] + std::abs(f[i]);
    std::vector<double> out(static_cast<std::size_t>(n),
                            -std::numeric_limits<double>::infinity());
    max_avg_recurse(S, 0, n, out);
    Eigen::ArrayXd v(n);
    for (std::int64_t i = 0; i < n; ++i) v[i] = out[i];
    return f.with_values(std::move(v));
  }

  // 2d: direct enumeration of all grid-aligned squares via prefix sums.
  std::int64_t m = grid.cells_per_axis();
  std::vector<double> S(static_cast<std::size_t>((m + 1) * (m + 1)), 0.0);
  auto ps = [&](std::int64_t x, std::int64_t y) -> double& {
    return S[static_cast<std::size_t>(y * (m + 1) + x)];
  };
  for (std::int64_t y = 0; y < m; ++y)
    for (std::int64_t x = 0; x < m; ++x)
      ps(x + 1, y + 1) = std::abs(f[grid.cell_index(x, y)]) + ps(x, y + 1) +
                         ps(x + 1, y) - ps(x, y);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (std::int64_t k = 1; k <= m; ++k) {
    double inv = 1.0 / static_cast<double>(k * k);
    for (std::int64_t y = 0; y + k <= m; ++y) {
      for (std::int64_t x = 0; x + k <= m; ++x) {
        double avg =
            (ps(x + k, y + k) - ps(x, y + k) - ps(x + k, y) + ps(x, y)) * inv;
        for (std::int64_t cy = y; cy < y + k; ++cy)
          for (std::int64_t cx = x; cx < x + k; ++cx) {
            double& o = out[grid.cell_index(cx, cy)];
            o = std::max(o, avg);
          }
      }
    }
  }
  return f.with_values(std::move(out));
}

namespace {

void dyadic_local_recurse(const GridFunction& f, const GridCube& P,
                          double running_max, Eigen::ArrayXd& out) {
  double avg = 0.0;
  P.for_each_cell([&](std::int64_t i) { avg += std::abs(f[i]); });
  avg /= static_cast<double>(P.cell_count());
  running_max = std::max(running_max, avg);
  if (P.size_cells() == 1) {
    P.for_each_cell([&](std::int64_t i) { out[i] = running_max; });
    return;
  }
  std::int64_t h = P.size_cells() / 2;
  auto c = P.corner();
  int dim = P.grid()->dimension();
  for (int sy = 0; sy < (dim == 2 ? 2 : 1); ++sy)
    for (int sx = 0; sx < 2; ++sx) {
      GridCube child(P.grid(), {c[0] + sx * h, c[1] + sy * h}, h);
      dyadic_local_recurse(f, child, running_max, out);
    }
}

}  // namespace

GridFunction maximal_dyadic_local(const GridFunction& f, const GridCube& Q) {
  require_same_grid(f, Q);
  if (!Q.is_dyadic())
    throw std::domain_error("maximal_dyadic_local: Q must be dyadic");
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(f.size());
  dyadic_local_recurse(f, Q, 0.0, out);
  return f.with_values(std::move(out));
}

StepRearrangement rearrangement(const GridFunction& f, const GridCube& Q) {
  require_same_grid(f, Q);
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(Q.cell_count()));
  Q.for_each_cell([&](std::int64_t i) { vals.push_back(std::abs(f[i])); });
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return StepRearrangement(std::move(vals), Q.grid()->cell_measure());
}

double distribution_measure(const GridFunction& f, const GridCube& Q,
                            double alpha) {
  require_same_grid(f, Q);
  if (alpha < 0.0) throw std::domain_error("distribution_measure: alpha < 0");
  std::int64_t count = 0;
  Q.for_each_cell([&](std::int64_t i) {
    if (std::abs(f[i]) > alpha) ++count;
  });
  return static_cast<double>(count) * Q.grid()->cell_measure();
}

std::vector<GridCube> enumerate_cubes(const GridPtr& grid, EnumeratePolicy policy,
                                      std::int64_t max_count) {
  std::vector<GridCube> cubes;
  std::int64_t m = grid->cells_per_axis();
  int dim = grid->dimension();
  auto push = [&](std::int64_t cx, std::int64_t cy, std::int64_t k) {
    cubes.emplace_back(grid, std::array<std::int64_t, 2>{cx, cy}, k);
    return max_count > 0 && static_cast<std::int64_t>(cubes.size()) >= max_count;
  };
  if (policy == EnumeratePolicy::All) {
    for (std::int64_t k = m; k >= 1; --k)
      for (std::int64_t cy = 0; cy + (dim == 2 ? k : 0) <= (dim == 2 ? m : 0); ++cy)
        for (std::int64_t cx = 0; cx + k <= m; ++cx)
          if (push(cx, cy, k)) return cubes;
  } else {
    for (std::int64_t k = m; k >= 1; k /= 2)
      for (std::int64_t cy = 0; cy + (dim == 2 ? k : 0) <= (dim == 2 ? m : 0);
           cy += k)
        for (std::int64_t cx = 0; cx + k <= m; cx += k)
          if (push(cx, cy, k)) return cubes;
  }
  return cubes;
}

}  // namespace bmox
