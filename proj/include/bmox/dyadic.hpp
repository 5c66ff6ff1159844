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

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace bmox {

/// Finite dyadic grid on a root cube [origin, origin + side]^dim.
/// The finest cells have edge side * 2^-depth; everything downstream is
/// piecewise constant on these cells.
class DyadicGrid {
 public:
  DyadicGrid(int dimension, std::array<double, 2> origin, double side, int depth)
      : dim_(dimension), origin_(origin), side_(side), depth_(depth) {
    if (dimension != 1 && dimension != 2)
      throw std::domain_error("DyadicGrid: dimension must be 1 or 2");
    if (!(side > 0.0)) throw std::domain_error("DyadicGrid: side must be positive");
    if (depth < 1) throw std::domain_error("DyadicGrid: depth must be >= 1");
    if (depth > 30) throw std::domain_error("DyadicGrid: depth too large");
    if (dimension == 2 && depth > 15)
      throw std::domain_error("DyadicGrid: 2d depth too large");
  }

  int dimension() const { return dim_; }
  const std::array<double, 2>& origin() const { return origin_; }
  double side() const { return side_; }
  int depth() const { return depth_; }

  std::int64_t cells_per_axis() const { return std::int64_t{1} << depth_; }
  std::int64_t cell_count() const {
    std::int64_t m = cells_per_axis();
    return dim_ == 1 ? m : m * m;
  }
  double cell_edge() const { return side_ / static_cast<double>(cells_per_axis()); }
  double cell_measure() const {
    double e = cell_edge();
    return dim_ == 1 ? e : e * e;
  }

  /// Row-major linear index of a cell from per-axis indices.
  std::int64_t cell_index(std::int64_t ix, std::int64_t iy = 0) const {
    return dim_ == 1 ? ix : iy * cells_per_axis() + ix;
  }

  /// Center coordinate of cell `i` along axis 0 (and axis 1 for 2d).
  std::array<double, 2> cell_center(std::int64_t linear) const {
    std::int64_t m = cells_per_axis();
    std::int64_t ix = dim_ == 1 ? linear : linear % m;
    std::int64_t iy = dim_ == 1 ? 0 : linear / m;
    double e = cell_edge();
    return {origin_[0] + (static_cast<double>(ix) + 0.5) * e,
            dim_ == 2 ? origin_[1] + (static_cast<double>(iy) + 0.5) * e : 0.0};
  }

  bool same_layout(const DyadicGrid& other) const {
    return dim_ == other.dim_ && depth_ == other.depth_ && side_ == other.side_ &&
           origin_ == other.origin_;
  }

 private:
  int dim_;
  std::array<double, 2> origin_;
  double side_;
  int depth_;
};

using GridPtr = std::shared_ptr<const DyadicGrid>;

/// Axis-aligned, grid-aligned cube: lower corner in cell units plus an edge
/// length in cells. Dyadic cubes are the special case where the edge is a
/// power of two and the corner is aligned to it.
class GridCube {
 public:
  GridCube(GridPtr grid, std::array<std::int64_t, 2> corner, std::int64_t size_cells)
      : grid_(std::move(grid)), corner_(corner), size_(size_cells) {
    if (!grid_) throw std::domain_error("GridCube: null grid");
    if (size_ < 1) throw std::domain_error("GridCube: size must be >= 1");
    std::int64_t m = grid_->cells_per_axis();
    for (int a = 0; a < grid_->dimension(); ++a) {
      if (corner_[a] < 0 || corner_[a] + size_ > m)
        throw std::domain_error("GridCube: cube not contained in the root cube");
    }
    if (grid_->dimension() == 1) corner_[1] = 0;
  }

  static GridCube root(GridPtr grid) {
    std::int64_t m = grid->cells_per_axis();
    return GridCube(std::move(grid), {0, 0}, m);
  }

  const GridPtr& grid() const { return grid_; }
  std::array<std::int64_t, 2> corner() const { return corner_; }
  std::int64_t size_cells() const { return size_; }

  std::int64_t cell_count() const {
    return grid_->dimension() == 1 ? size_ : size_ * size_;
  }
  double edge() const { return static_cast<double>(size_) * grid_->cell_edge(); }
  double measure() const {
    return static_cast<double>(cell_count()) * grid_->cell_measure();
  }

  bool is_dyadic() const {
    if ((size_ & (size_ - 1)) != 0) return false;
    for (int a = 0; a < grid_->dimension(); ++a)
      if (corner_[a] % size_ != 0) return false;
    return true;
  }

  /// Dyadic level: 0 is the root. Only meaningful for dyadic cubes.
  int level() const {
    std::int64_t m = grid_->cells_per_axis();
    int l = 0;
    for (std::int64_t s = size_; s < m; s <<= 1) ++l;
    return l;
  }

  bool contains_cell(std::int64_t linear) const {
    std::int64_t m = grid_->cells_per_axis();
    std::int64_t ix = grid_->dimension() == 1 ? linear : linear % m;
    std::int64_t iy = grid_->dimension() == 1 ? 0 : linear / m;
    if (ix < corner_[0] || ix >= corner_[0] + size_) return false;
    if (grid_->dimension() == 2 && (iy < corner_[1] || iy >= corner_[1] + size_))
      return false;
    return true;
  }

  bool contains(const GridCube& other) const {
    for (int a = 0; a < grid_->dimension(); ++a) {
      if (other.corner_[a] < corner_[a] ||
          other.corner_[a] + other.size_ > corner_[a] + size_)
        return false;
    }
    return true;
  }

  bool operator==(const GridCube& o) const {
    return corner_ == o.corner_ && size_ == o.size_;
  }

  /// Row-major visit of the cells of this cube.
  template <typename F>
  void for_each_cell(F&& f) const {
    std::int64_t m = grid_->cells_per_axis();
    if (grid_->dimension() == 1) {
      for (std::int64_t ix = corner_[0]; ix < corner_[0] + size_; ++ix) f(ix);
    } else {
      for (std::int64_t iy = corner_[1]; iy < corner_[1] + size_; ++iy)
        for (std::int64_t ix = corner_[0]; ix < corner_[0] + size_; ++ix)
          f(iy * m + ix);
    }
  }

 private:
  GridPtr grid_;
  std::array<std::int64_t, 2> corner_;
  std::int64_t size_;
};

/// Piecewise-constant real function on the finest cells of a grid.
class GridFunction {
 public:
  GridFunction(GridPtr grid, Eigen::ArrayXd values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::domain_error("GridFunction: null grid");
    if (values_.size() != grid_->cell_count())
      throw std::domain_error("GridFunction: value count does not match grid");
    if (!values_.isFinite().all())
      throw std::domain_error("GridFunction: non-finite value");
  }

  static GridFunction constant(GridPtr grid, double c) {
    Eigen::ArrayXd v = Eigen::ArrayXd::Constant(grid->cell_count(), c);
    return GridFunction(std::move(grid), std::move(v));
  }

  const GridPtr& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  double operator[](std::int64_t i) const { return values_[i]; }
  std::int64_t size() const { return values_.size(); }

  GridFunction with_values(Eigen::ArrayXd v) const {
    return GridFunction(grid_, std::move(v));
  }

 private:
  GridPtr grid_;
  Eigen::ArrayXd values_;
};

/// Left-continuous non-increasing rearrangement of |f| on a cube, stored as
/// steps (value v_k on cumulative measure ((k-1)mu, k mu]).
class StepRearrangement {
 public:
  StepRearrangement(std::vector<double> sorted_desc, double cell_measure);

  /// Left-continuous evaluation: value at t uses the strict-inequality
  /// convention inf{a > 0 : |{|f| > a}| < t}.
  double value_at(double t) const;

  /// Measure of {|f| > alpha}, computed from the steps.
  double distribution(double alpha) const;

  double total_measure() const { return cell_measure_ * static_cast<double>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double cell_measure() const { return cell_measure_; }

 private:
  std::vector<double> values_;  // non-increasing
  double cell_measure_;
};

enum class EnumeratePolicy { All, Dyadic };

void require_same_grid(const GridFunction& f, const GridCube& Q);

/// Measure-weighted mean of f over Q. Summation order is row-major.
double average(const GridFunction& f, const GridCube& Q);

/// Mean of |f - c| over Q (the mean oscillation when c = <f>_Q).
double mean_deviation(const GridFunction& f, const GridCube& Q, double c);

/// Uncentered maximal function over all grid-aligned cubes, evaluated per
/// cell. 1d uses a divide-and-conquer convex-hull sweep; 2d enumerates
/// squares directly.
GridFunction maximal_all_cubes(const GridFunction& f);

/// Local dyadic maximal operator on Q: per cell of Q, the sup of <|f|>_P over
/// dyadic P in D(Q) containing the cell. Zero outside Q.
GridFunction maximal_dyadic_local(const GridFunction& f, const GridCube& Q);

StepRearrangement rearrangement(const GridFunction& f, const GridCube& Q);

/// Total measure of cells in Q where |f| > alpha.
double distribution_measure(const GridFunction& f, const GridCube& Q, double alpha);

/// Deterministic cube enumeration: size descending, then corner row-major.
/// `max_count` truncates; 0 means no limit.
std::vector<GridCube> enumerate_cubes(const GridPtr& grid, EnumeratePolicy policy,
                                      std::int64_t max_count = 0);

}  // namespace bmox
