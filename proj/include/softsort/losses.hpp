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

// Losses built on the soft operators: a differentiable Spearman-style rank
// loss and soft least trimmed squares for robust regression.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softsort/types.hpp"

namespace softsort {

struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// 1/2 ||target - soft_rank(theta)||^2 and its gradient with respect to theta.
LossValue soft_spearman_loss(std::span<const double> target_rank, std::span<const double> theta,
                             double epsilon, Regularizer reg = Regularizer::kQuadratic);

/// Number of largest losses discarded plus the soft sort settings.
struct TrimSpec {
  std::size_t k = 0;
  double epsilon = 1.0;
  Regularizer regularizer = Regularizer::kQuadratic;
};

/// Mean of the n - k smallest entries of the descending soft sort of
/// `losses`, and its gradient with respect to `losses`. Requires k < n.
LossValue soft_lts_loss(std::span<const double> losses, const TrimSpec& spec);

/// Row-major n x d design matrix.
struct Dataset {
  std::vector<std::vector<double>> features;
  std::vector<double> targets;
};

/// Fits a linear model by fixed-step gradient descent on the soft trimmed
/// objective over squared residual losses 1/2 (y_i - <w, x_i>)^2. Starts at
/// `initial` (zeros when empty). No intercept: append a constant feature.
std::vector<double> lts_demo_fit(const Dataset& data, const TrimSpec& spec, std::size_t steps,
                                 double step_size, std::span<const double> initial = {});

/// Per-sample squared-residual losses 1/2 (y_i - <w, x_i>)^2.
std::vector<double> squared_losses(const Dataset& data, std::span<const double> weights);

/// Coefficient of determination of the linear model on `data`.
double r2_score(const Dataset& data, std::span<const double> weights);

/// Ordinary least squares via the normal equations.
std::vector<double> least_squares_fit(const Dataset& data);

}  // namespace softsort
