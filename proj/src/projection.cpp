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

#include "softsort/projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace softsort {

Permutation::Permutation(std::vector<std::size_t> forward)
    : forward_(std::move(forward)), inverse_(forward_.size(), forward_.size()) {
  for (std::size_t i = 0; i < forward_.size(); ++i) {
    const std::size_t f = forward_[i];
    detail::require(f < forward_.size() && inverse_[f] == forward_.size(),
                    "permutation: not a bijection");
    inverse_[f] = i;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return Permutation(std::move(idx));
}

std::vector<double> Permutation::gather(std::span<const double> x) const {
  detail::require_same_size(x.size(), size(), "permutation gather");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[forward_[i]];
  return out;
}

std::vector<double> Permutation::scatter(std::span<const double> x) const {
  detail::require_same_size(x.size(), size(), "permutation scatter");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[forward_[i]] = x[i];
  return out;
}

Permutation argsort_descending(std::span<const double> x) {
  const std::size_t n = x.size();
  if (std::is_sorted(x.begin(), x.end(), std::greater<>())) return Permutation::identity(n);

  // Sorting (value, index) pairs keeps the comparisons cache-local; the index
  // tie-break makes the unstable sort reproduce the stable order.
  std::vector<std::pair<double, std::size_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) keyed[i] = {x[i], i};
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = keyed[i].second;
  return Permutation(std::move(idx));
}

ProjectionContext::ProjectionContext(Permutation sigma, IsotonicSolution solution)
    : sigma_(std::move(sigma)), solution_(std::move(solution)) {}

namespace {

void require_non_increasing(std::span<const double> x, const char* what) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i - 1] < x[i]) throw InvalidArgument(std::string(what) + " must be sorted non-increasing");
  }
}

void require_strictly_decreasing(std::span<const double> w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (!(w[i - 1] > w[i])) {
      throw InvalidArgument("epsilon threshold undefined: w has ties or is not decreasing");
    }
  }
}

void check_threshold_inputs(std::span<const double> s, std::span<const double> w) {
  detail::require_same_size(s.size(), w.size(), "epsilon threshold");
  detail::require(!s.empty(), "epsilon threshold: empty input");
  detail::require_finite(s, "epsilon threshold");
  detail::require_finite(w, "epsilon threshold");
  require_non_increasing(s, "s");
  require_strictly_decreasing(w);
}

double log_sum_exp(std::span<const double> x) {
  const double hi = *std::max_element(x.begin(), x.end());
  double acc = 0.0;
  for (double v : x) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

}  // namespace

Projection project(std::span<const double> z, std::span<const double> w, Regularizer reg) {
  detail::require_same_size(z.size(), w.size(), "project");
  detail::require(!z.empty(), "project: empty input");
  detail::require_finite(z, "project");
  detail::require_finite(w, "project");
  require_non_increasing(w, "project: w");

  Permutation sigma = argsort_descending(z);
  const std::vector<double> s = sigma.gather(z);
  IsotonicSolution sol = solve_isotonic(s, w, reg);

  std::vector<double> sorted_out(s.size());
  const std::span<const double> v = sol.v();
  for (std::size_t i = 0; i < s.size(); ++i) sorted_out[i] = s[i] - v[i];
  std::vector<double> values = sigma.scatter(sorted_out);
  return Projection{std::move(values), ProjectionContext(std::move(sigma), std::move(sol))};
}

std::vector<double> jvp_projection(const ProjectionContext& ctx, std::span<const double> u,
                                   Argument arg) {
  detail::require_same_size(u.size(), ctx.size(), "jvp_projection");
  const Permutation& sigma = ctx.sigma();
  if (arg == Argument::kWeights) {
    // Only v depends on w, and w is already indexed in sorted order.
    std::vector<double> dv = jvp_isotonic(ctx.solution(), u, Argument::kWeights);
    for (double& x : dv) x = -x;
    return sigma.scatter(dv);
  }
  std::vector<double> us = sigma.gather(u);
  const std::vector<double> dv = jvp_isotonic(ctx.solution(), us, Argument::kInput);
  for (std::size_t i = 0; i < us.size(); ++i) us[i] -= dv[i];
  return sigma.scatter(us);
}

std::vector<double> vjp_projection(const ProjectionContext& ctx, std::span<const double> u,
                                   Argument arg) {
  detail::require_same_size(u.size(), ctx.size(), "vjp_projection");
  const Permutation& sigma = ctx.sigma();
  std::vector<double> us = sigma.gather(u);
  if (arg == Argument::kWeights) {
    std::vector<double> g = vjp_isotonic(ctx.solution(), us, Argument::kWeights);
    for (double& x : g) x = -x;
    return g;
  }
  const std::vector<double> g = vjp_isotonic(ctx.solution(), us, Argument::kInput);
  for (std::size_t i = 0; i < us.size(); ++i) us[i] -= g[i];
  return sigma.scatter(us);
}

double epsilon_min(std::span<const double> s, std::span<const double> w) {
  check_threshold_inputs(s, w);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    best = std::min(best, (s[i] - s[i + 1]) / (w[i] - w[i + 1]));
  }
  return best;
}

double epsilon_max(std::span<const double> s, std::span<const double> w) {
  check_threshold_inputs(s, w);
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      best = std::max(best, (s[i] - s[j]) / (w[i] - w[j]));
    }
  }
  return best;
}

std::vector<double> limit_projection(std::span<const double> z, std::span<const double> w,
                                     double eps, Regularizer reg, LimitRegime regime) {
  detail::require_same_size(z.size(), w.size(), "limit_projection");
  detail::require(eps > 0.0 && std::isfinite(eps), "limit_projection: eps must be positive");
  const Permutation sigma = argsort_descending(z);
  const std::vector<double> s = sigma.gather(z);
  const std::size_t n = z.size();

  if (regime == LimitRegime::kSmall) {
    detail::require(eps <= epsilon_min(s, w), "limit_projection: eps above epsilon_min");
    return sigma.scatter(w);
  }

  detail::require(eps > epsilon_max(s, w), "limit_projection: eps not above epsilon_max");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i] / eps;
  double shift = 0.0;
  if (reg == Regularizer::kQuadratic) {
    for (std::size_t i = 0; i < n; ++i) shift += out[i] - w[i];
    shift /= static_cast<double>(n);
  } else {
    shift = log_sum_exp(out) - log_sum_exp(w);
  }
  for (double& x : out) x -= shift;
  return out;
}

}  // namespace softsort
