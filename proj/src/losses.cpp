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

#include "softsort/losses.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>

#include "softsort/operators.hpp"

namespace softsort {

LossValue soft_spearman_loss(std::span<const double> target_rank, std::span<const double> theta,
                             double epsilon, Regularizer reg) {
  detail::require_same_size(target_rank.size(), theta.size(), "soft_spearman_loss");
  const SoftOpResult ranks = soft_rank(theta, epsilon, reg);
  std::vector<double> residual(theta.size());
  double value = 0.0;
  for (std::size_t i = 0; i < residual.size(); ++i) {
    residual[i] = ranks.values[i] - target_rank[i];
    value += 0.5 * residual[i] * residual[i];
  }
  return LossValue{value, vjp_soft(ranks, residual)};
}

LossValue soft_lts_loss(std::span<const double> losses, const TrimSpec& spec) {
  const std::size_t n = losses.size();
  detail::require(n >= 1, "soft_lts_loss: empty loss vector");
  detail::require(spec.k < n, "soft_lts_loss: k must satisfy 0 <= k < n");

  const SoftOpResult sorted = soft_sort(losses, spec.epsilon, spec.regularizer);
  const double scale = 1.0 / static_cast<double>(n - spec.k);
  std::vector<double> tail(n, 0.0);
  double value = 0.0;
  for (std::size_t i = spec.k; i < n; ++i) {
    tail[i] = scale;
    value += sorted.values[i];
  }
  return LossValue{value * scale, vjp_soft(sorted, tail)};
}

namespace {

void check_dataset(const Dataset& data) {
  detail::require_same_size(data.features.size(), data.targets.size(), "dataset rows");
  detail::require(!data.features.empty(), "dataset: no samples");
  const std::size_t d = data.features.front().size();
  for (std::size_t i = 0; i < data.features.size(); ++i) {
    if (data.features[i].size() != d) {
      throw InvalidArgument("dataset: ragged feature row " + std::to_string(i));
    }
  }
}

double predict(std::span<const double> x, std::span<const double> weights) {
  return std::inner_product(x.begin(), x.end(), weights.begin(), 0.0);
}

}  // namespace

std::vector<double> squared_losses(const Dataset& data, std::span<const double> weights) {
  check_dataset(data);
  detail::require_same_size(weights.size(), data.features.front().size(), "weights");
  std::vector<double> out(data.targets.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = data.targets[i] - predict(data.features[i], weights);
    out[i] = 0.5 * r * r;
  }
  return out;
}

std::vector<double> lts_demo_fit(const Dataset& data, const TrimSpec& spec, std::size_t steps,
                                 double step_size, std::span<const double> initial) {
  check_dataset(data);
  detail::require(steps >= 1, "lts_demo_fit: steps must be >= 1");
  detail::require(step_size > 0.0, "lts_demo_fit: step_size must be positive");
  const std::size_t n = data.targets.size();
  const std::size_t d = data.features.front().size();

  std::vector<double> weights(d, 0.0);
  if (!initial.empty()) {
    detail::require_same_size(initial.size(), d, "lts_demo_fit initial weights");
    weights.assign(initial.begin(), initial.end());
  }

  std::vector<double> residual(n);
  std::vector<double> losses(n);
  for (std::size_t step = 0; step < steps; ++step) {
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = data.targets[i] - predict(data.features[i], weights);
      losses[i] = 0.5 * residual[i] * residual[i];
    }
    const LossValue objective = soft_lts_loss(losses, spec);
    // d loss_i / d w = -residual_i * x_i
    std::vector<double> grad(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double coef = -objective.gradient[i] * residual[i];
      for (std::size_t j = 0; j < d; ++j) grad[j] += coef * data.features[i][j];
    }
    for (std::size_t j = 0; j < d; ++j) weights[j] -= step_size * grad[j];
  }
  return weights;
}

double r2_score(const Dataset& data, std::span<const double> weights) {
  check_dataset(data);
  const std::size_t n = data.targets.size();
  const double mean =
      std::accumulate(data.targets.begin(), data.targets.end(), 0.0) / static_cast<double>(n);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = data.targets[i] - predict(data.features[i], weights);
    ss_res += r * r;
    ss_tot += (data.targets[i] - mean) * (data.targets[i] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

std::vector<double> least_squares_fit(const Dataset& data) {
  check_dataset(data);
  const auto n = static_cast<Eigen::Index>(data.targets.size());
  const auto d = static_cast<Eigen::Index>(data.features.front().size());
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = data.features[i][j];
    y(i) = data.targets[i];
  }
  const Eigen::VectorXd w = x.colPivHouseholderQr().solve(y);
  return {w.data(), w.data() + w.size()};
}

}  // namespace softsort
