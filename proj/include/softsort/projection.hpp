// Copyright 2026 The softsort Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Regularized projections onto the permutahedron P(w), the convex hull of all
// permutations of w:
//
//   quadratic:  argmin_{mu in P(w)} 1/2 ||mu - z||^2
//   entropic:   log argmin_{mu in P(exp(w))} KL(mu, exp(z))
//
// With w sorted descending and sigma the descending argsort of z, both reduce
// to z - v(z_sigma, w) scattered back through sigma^{-1}, where v is the
// isotonic solution of the matching regularizer.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "softsort/isotonic.hpp"
#include "softsort/types.hpp"

namespace softsort {

/// A bijection of {0..n-1} stored together with its inverse.
/// forward[i] is the index of the i-th largest entry of the sorted vector;
/// inverse[forward[i]] == i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> forward);

  static Permutation identity(std::size_t n);

  [[nodiscard]] std::span<const std::size_t> forward() const { return forward_; }
  [[nodiscard]] std::span<const std::size_t> inverse() const { return inverse_; }
  [[nodiscard]] std::size_t size() const { return forward_.size(); }

  /// out[i] = x[forward[i]]
  [[nodiscard]] std::vector<double> gather(std::span<const double> x) const;
  /// out[forward[i]] = x[i]; undoes gather().
  [[nodiscard]] std::vector<double> scatter(std::span<const double> x) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> inverse_;
};

/// Stable descending argsort: equal values keep their original order.
Permutation argsort_descending(std::span<const double> x);

/// Saved forward state of a projection, sufficient for O(n) Jacobian products.
class ProjectionContext {
 public:
  ProjectionContext(Permutation sigma, IsotonicSolution solution);

  [[nodiscard]] const Permutation& sigma() const { return sigma_; }
  [[nodiscard]] const IsotonicSolution& solution() const { return solution_; }
  [[nodiscard]] Regularizer regularizer() const { return solution_.regularizer(); }
  [[nodiscard]] const std::vector<double>& w_sorted() const { return solution_.w(); }
  [[nodiscard]] std::size_t size() const { return sigma_.size(); }

 private:
  Permutation sigma_;
  IsotonicSolution solution_;
};

struct Projection {
  std::vector<double> values;
  ProjectionContext context;
};

/// P_reg(z, w). w must be sorted non-increasing; this is checked, not fixed.
/// O(n log n) time, O(n) memory.
Projection project(std::span<const double> z, std::span<const double> w, Regularizer reg);

/// (dP/dz) u for Argument::kInput, or (dP/dw) u for Argument::kWeights. In the
/// latter case u is indexed like the sorted w.
std::vector<double> jvp_projection(const ProjectionContext& ctx, std::span<const double> u,
                                   Argument arg);

/// u^T (dP/dz) or u^T (dP/dw). u is indexed like z; the kWeights result is
/// indexed like the sorted w.
std::vector<double> vjp_projection(const ProjectionContext& ctx, std::span<const double> u,
                                   Argument arg);

/// min_i (s_i - s_{i+1}) / (w_i - w_{i+1}); +inf when n == 1. Below this
/// regularization strength the projection of s / eps is the vertex w.
/// Requires s non-increasing and w strictly decreasing.
double epsilon_min(std::span<const double> s, std::span<const double> w);

/// max_{i<j} (s_i - s_j) / (w_i - w_j); 0 when n == 1. Above this strength
/// the isotonic solution is a single block. O(n^2).
double epsilon_max(std::span<const double> s, std::span<const double> w);

enum class LimitRegime { kSmall, kLarge };

/// Closed-form P_reg(z / eps, w) in the small (eps <= epsilon_min) or large
/// (eps > epsilon_max) regime, evaluated at the descending sort of z. Throws
/// if eps is outside the requested regime.
std::vector<double> limit_projection(std::span<const double> z, std::span<const double> w,
                                     double eps, Regularizer reg, LimitRegime regime);

}  // namespace softsort
