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
#include <vector>

namespace bmox {

/// Family of dyadic subcubes of a root cube with a target sparseness eta.
/// Exclusive sets, layers and layer unions are derived exactly in cell counts.
class SparseFamily {
 public:
  SparseFamily(GridCube root, std::vector<GridCube> members, double eta);

  const GridCube& root() const { return root_; }
  const std::vector<GridCube>& members() const { return members_; }
  double eta_target() const { return eta_; }

  /// |E_P| in cells, aligned with members().
  const std::vector<std::int64_t>& exclusive_cells() const { return exclusive_; }
  /// Layer index of each member (number of strict ancestors within the family).
  const std::vector<int>& layers() const { return layer_; }
  /// |Omega_k| in cells, k = 0 .. max layer.
  const std::vector<std::int64_t>& layer_union_cells() const { return omega_; }

  /// Integer-valued overlap function sum_P chi_P on the root's grid.
  GridFunction overlap_function() const;

 private:
  GridCube root_;
  std::vector<GridCube> members_;
  double eta_;
  std::vector<std::int64_t> exclusive_;
  std::vector<int> layer_;
  std::vector<std::int64_t> omega_;
};

struct SparseVerification {
  double eta_actual;  // min over members of |E_P| / |P|
  bool layer_ok;      // |Omega_k| <= (1 - eta_actual)^k |Q| for all k
};

SparseVerification verify_sparse(const SparseFamily& family);

/// Exact integer form of the layer bound at eta = 1/2:
/// cells(Omega_k) * 2^k <= cells(Q) for every k.
bool layer_bound_exact_half(const SparseFamily& family);

struct CzResult {
  SparseFamily family;
  /// Smallest C verified cell-wise with
  /// |f - <f>_Q| <= C * sum_P <|f - <f>_P|>_P chi_P; +inf when the right
  /// side vanishes where the left does not.
  double domination_constant;
};

/// Stopping-time construction of an eta-sparse family dominating the
/// oscillation of f on Q.
CzResult cz_sparse_family(const GridFunction& f, const GridCube& Q, double eta);

/// Seeded randomized eta-sparse family; the exclusive-set constraint is
/// enforced by an exact cell-count budget, so verify_sparse always reports
/// eta_actual >= eta.
SparseFamily random_sparse(const GridPtr& grid, const GridCube& Q, double eta,
                           std::uint64_t seed);

/// ||sum_P chi_P||_{X_Q} on the family's root.
double sparse_sum_norm(const SparseFamily& family, const SpaceSpec& space);

/// Nested-set variant: Omega_0 >= Omega_1 >= ... given as cell masks over the
/// root; requires the declared decay |Omega_k| <= gamma^k |Q|.
double nested_sum_norm(const GridCube& root,
                       const std::vector<std::vector<std::int64_t>>& omegas,
                       double gamma, const SpaceSpec& space);

}  // namespace bmox
