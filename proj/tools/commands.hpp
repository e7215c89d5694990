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

// Implementation of the command-line subcommands. Each command is a plain
// function over streams so it can be exercised without spawning a process.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "io.hpp"
#include "softsort/losses.hpp"
#include "softsort/operators.hpp"
#include "softsort/oracle.hpp"

namespace softsort::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitCheckFailed = 3 };

enum class ApplyKind { kSort, kRank };

/// Regularizer names accepted on the command line: "q", "e", "kl-direct".
struct RegularizerChoice {
  Regularizer regularizer = Regularizer::kQuadratic;
  bool kl_direct = false;
};

/// Throws InvalidArgument for unknown names.
RegularizerChoice parse_regularizer(const std::string& name);
Direction parse_direction(const std::string& name);

struct ApplyOptions {
  ApplyKind kind = ApplyKind::kRank;
  double epsilon = 1.0;
  std::string regularizer = "q";
  std::string direction = "desc";
  bool hard = false;
  RowFormat format = RowFormat::kCsv;
};

/// Applies the operator to every input row and writes one output row per
/// input line. Blank lines map to blank lines.
int cmd_apply(const ApplyOptions& options, std::istream& in, std::ostream& out,
              std::ostream& err);

struct BenchRecord {
  std::size_t n = 0;
  std::size_t batch = 0;
  std::string op;
  std::string regularizer;
  double mean_ms = 0.0;
  double std_ms = 0.0;
  std::size_t reps = 0;
};

inline constexpr std::size_t kMinBenchReps = 3;

struct BenchOptions {
  std::vector<std::size_t> sizes{100, 500, 1000, 2000, 5000};
  std::size_t batch = 128;
  std::size_t reps = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  double epsilon = 1.0;
};

/// Times batched forward soft sort and soft rank for both regularizers on
/// standard-normal batches. One warmup round per configuration is discarded.
/// Throws InvalidArgument when reps < kMinBenchReps or a size is zero.
std::vector<BenchRecord> run_bench(const BenchOptions& options);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

struct GradcheckOptions {
  std::size_t trials = 50;
  std::size_t n = 8;
  std::uint64_t seed = 0;
  double h = 1e-6;
  double tolerance = 1e-5;
  /// Negates every vjp result. Used to confirm the check can fail.
  bool inject_sign_flip = false;
};

struct GradcheckReport {
  /// Keyed by "<operator>/<regularizer>", e.g. "rank/q" or "project-w/e".
  std::map<std::string, oracle::OracleReport> cases;
  std::size_t skipped_unstable = 0;
  [[nodiscard]] bool ok() const;
};

/// Compares jvp and vjp of every soft operator and of the projection (with
/// respect to both z and w) against central finite differences on random
/// tie-free instances, resampling points where the pooled block structure
/// changes under the perturbation.
GradcheckReport run_gradcheck(const GradcheckOptions& options);
int cmd_gradcheck(const GradcheckOptions& options, std::ostream& out, std::ostream& err);

struct LtsDemoOptions {
  double outlier_fraction = 0.2;
  /// Single regularization strength; when empty, sweeps a log-spaced grid.
  std::optional<double> epsilon;
  double k_fraction = 0.3;
  std::uint64_t seed = 0;
  std::size_t n_train = 200;
  std::size_t n_test = 200;
  std::size_t dim = 5;
  std::size_t steps = 1500;
  double step_size = 0.3;
};

struct LtsDemoRow {
  std::size_t k = 0;
  double epsilon = 0.0;
  double train_objective = 0.0;
  double test_r2 = 0.0;
};

/// Synthetic split: clean test targets, training targets with a fraction
/// shifted by N(0, 5 std(y)) noise. Features include a trailing constant 1.
struct LtsDemoData {
  Dataset train;
  Dataset test;
};
LtsDemoData make_lts_demo_data(const LtsDemoOptions& options);

/// The epsilon grid used when no single epsilon is requested: 10 values
/// log-spaced between 1e-3 and 1e4.
std::vector<double> default_epsilon_grid();

/// First row: the untrimmed (k = 0) least-squares baseline. Remaining rows:
/// one soft trimmed fit per epsilon with k = ceil(k_fraction * n_train).
std::vector<LtsDemoRow> run_lts_demo(const LtsDemoOptions& options);
int cmd_lts_demo(const LtsDemoOptions& options, std::ostream& out, std::ostream& err);

}  // namespace softsort::cli
