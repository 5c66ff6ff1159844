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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace bmox {

/// Young-type function for Luxemburg norms. Non-decreasing, phi(0) = 0,
/// phi(t) -> inf. Closed-form inverses are attached where available; the
/// generic inverse falls back to bisection.
class OrliczFunction {
 public:
  enum class Tag { Power, ExpL, PowerLog, Custom };

  static OrliczFunction power(double p);
  static OrliczFunction exp_l();
  static OrliczFunction power_log(double p, double alpha);
  static OrliczFunction custom(std::string name, std::function<double(double)> phi,
                               bool convex);

  Tag tag() const { return tag_; }
  const std::string& name() const { return name_; }
  bool convex() const { return convex_; }

  double operator()(double t) const { return phi_(t); }
  /// phi^{-1}(u) for u > 0; bisection when no closed form is attached.
  double inverse(double u) const;

  /// Sampled monotonicity / limit check on a log grid; throws on failure.
  void validate() const;

 private:
  OrliczFunction(Tag tag, std::string name, std::function<double(double)> phi,
                 std::optional<std::function<double(double)>> inv, bool convex)
      : tag_(tag), name_(std::move(name)), phi_(std::move(phi)),
        inverse_(std::move(inv)), convex_(convex) {}

  Tag tag_;
  std::string name_;
  std::function<double(double)> phi_;
  std::optional<std::function<double(double)>> inverse_;
  bool convex_;
};

/// Per-cell measurable exponent p(x) with cached extremes.
class ExponentField {
 public:
  explicit ExponentField(GridFunction p);

  const GridFunction& values() const { return p_; }
  double p_minus() const { return pmin_; }
  double p_plus() const { return pmax_; }

 private:
  GridFunction p_;
  double pmin_, pmax_;
};

/// Strictly positive locally integrable weight, piecewise constant on cells.
class Weight {
 public:
  explicit Weight(GridFunction w);

  const GridFunction& values() const { return w_; }
  /// w(Q) = integral of w over Q.
  double mass(const GridCube& Q) const;

 private:
  GridFunction w_;
};

struct LpSpace {
  double p;  // quasi-norm range p < 1 admitted
};
struct WeightedL1Space {
  Weight weight;
};
struct OrliczSpace {
  OrliczFunction phi;
};
struct VarExpSpace {
  ExponentField exponent;
};

/// A family X = {X_Q}: a rule mapping (cube, function) to a normalized local
/// norm. The variant determines the normalization: Lp / weighted L1 /
/// variable exponent divide by the indicator norm, Orlicz uses the
/// |Q|-averaged Luxemburg modular, which is intrinsically normalized.
class SpaceSpec {
 public:
  using Variant = std::variant<LpSpace, WeightedL1Space, OrliczSpace, VarExpSpace>;

  explicit SpaceSpec(Variant v) : v_(std::move(v)) {}

  static SpaceSpec lp(double p) { return SpaceSpec(LpSpace{p}); }
  static SpaceSpec weighted_l1(Weight w) {
    return SpaceSpec(WeightedL1Space{std::move(w)});
  }
  static SpaceSpec orlicz(OrliczFunction phi) {
    return SpaceSpec(OrliczSpace{std::move(phi)});
  }
  static SpaceSpec varexp(ExponentField p) {
    return SpaceSpec(VarExpSpace{std::move(p)});
  }

  const Variant& variant() const { return v_; }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  /// Rearrangement invariant: the local norm depends only on the
  /// distribution of |f| relative to |Q|.
  bool rearrangement_invariant() const {
    return std::holds_alternative<LpSpace>(v_) ||
           std::holds_alternative<OrliczSpace>(v_);
  }

  /// Whether c -> ||f - c||_{X_Q} is convex (Banach range).
  bool convex_in_shift() const;

  std::string describe() const;

 private:
  Variant v_;
};

/// ||f||_{X_Q} for the given family.
double local_norm(const SpaceSpec& space, const GridFunction& f, const GridCube& Q);

/// Normalized Luxemburg norm inf{a > 0 : |Q|^{-1} int_Q phi(|f|/a) <= 1},
/// by bisection on a. Returns 0 for f = 0 on Q.
double luxemburg_solve(const OrliczFunction& phi, const GridFunction& f,
                       const GridCube& Q);

/// Unnormalized variable-exponent norm inf{l > 0 : int_Q |f/l|^{p(x)} <= 1}.
double varexp_norm_unnormalized(const ExponentField& p, const GridFunction& f,
                                const GridCube& Q);

/// (min, max) of ||chi_Q||_{X_Q} over the enumerated cubes.
std::pair<double, double> normalization_check(const SpaceSpec& space,
                                              const GridPtr& grid,
                                              EnumeratePolicy policy = EnumeratePolicy::All);

/// inf over cubes of the minimal ||chi_E||_{X_Q} over E subset Q with
/// |E| >= delta |Q|. Exact for measure-only and separable variants, greedy
/// with swap refinement for variable exponents (an upper bound on the true
/// margin in that case).
double a_delta_margin(const SpaceSpec& space, const GridPtr& grid, double delta,
                      EnumeratePolicy policy = EnumeratePolicy::All);

/// psi_X(t): sup over cubes and subsets E with |E| <= t|Q| of ||chi_E||_{X_Q}.
double psi_pointwise(const SpaceSpec& space, const GridPtr& grid, double t,
                     EnumeratePolicy policy = EnumeratePolicy::All);

/// 3 * sum_{k=1}^K psi_X(2^-k), the computable surrogate of the logarithmic
/// integral of psi_X.
double psi_dyadic_integral(const SpaceSpec& space, const GridPtr& grid, int K,
                           EnumeratePolicy policy = EnumeratePolicy::All);

/// Fundamental function ||chi_E||_X at measure t, for rearrangement
/// invariant variants only (canonical left-aligned E on the root).
double fundamental_function(const SpaceSpec& space, const GridPtr& grid, double t);

}  // namespace bmox
