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

// softsort: apply soft sorting/ranking operators to data files, benchmark
// them, check their gradients and run the robust-regression demo.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace softsort::cli;

struct ApplyArgs {
  ApplyOptions options;
  std::string input = "-";
  std::string output = "-";
  bool json = false;
};

void add_apply(CLI::App& app, const std::string& name, ApplyKind kind, ApplyArgs& args) {
  auto* cmd = app.add_subcommand(name, kind == ApplyKind::kSort ? "Soft (or hard) sort each row"
                                                                 : "Soft (or hard) rank each row");
  args.options.kind = kind;
  cmd->add_option("input", args.input, "Input file (CSV or JSON lines); '-' for stdin");
  cmd->add_option("-o,--output", args.output, "Output file; '-' for stdout");
  cmd->add_option("--epsilon", args.options.epsilon, "Regularization strength (> 0)");
  cmd->add_option("--reg", args.options.regularizer, "Regularizer: q, e or kl-direct (rank only)");
  cmd->add_option("--direction", args.options.direction, "asc or desc");
  cmd->add_flag("--hard", args.options.hard, "Use the exact (non-differentiable) operator");
  cmd->add_flag("--json", args.json, "Read and write JSON lines instead of CSV");
}

int run_apply(ApplyArgs& args) {
  args.options.format = args.json ? RowFormat::kJsonLines : RowFormat::kCsv;
  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (args.input != "-") {
    file_in.open(args.input);
    if (!file_in) {
      std::cerr << "error: cannot open " << args.input << '\n';
      return kExitData;
    }
    in = &file_in;
  }
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (args.output != "-") {
    file_out.open(args.output);
    if (!file_out) {
      std::cerr << "error: cannot write " << args.output << '\n';
      return kExitData;
    }
    out = &file_out;
  }
  return cmd_apply(args.options, *in, *out, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast differentiable sorting and ranking"};
  app.require_subcommand(1);

  ApplyArgs sort_args;
  ApplyArgs rank_args;
  add_apply(app, "sort", ApplyKind::kSort, sort_args);
  add_apply(app, "rank", ApplyKind::kRank, rank_args);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time batched forward operators");
  bench_cmd->add_option("--sizes", bench.sizes, "Vector lengths")->delimiter(',');
  bench_cmd->add_option("--batch", bench.batch, "Rows per batch");
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions (>= 3)");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");
  bench_cmd->add_option("--epsilon", bench.epsilon, "Regularization strength");

  GradcheckOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare Jacobian products with finite differences");
  grad_cmd->add_option("--trials", grad.trials, "Stable instances per case");
  grad_cmd->add_option("--n", grad.n, "Vector length");
  grad_cmd->add_option("--seed", grad.seed, "Random seed");

  LtsDemoOptions lts;
  double lts_eps = 0.0;
  auto* lts_cmd = app.add_subcommand("lts-demo", "Soft least trimmed squares on synthetic data");
  lts_cmd->add_option("--outliers", lts.outlier_fraction, "Fraction of corrupted training targets");
  auto* eps_opt = lts_cmd->add_option("--epsilon", lts_eps, "Single epsilon (default: sweep)");
  lts_cmd->add_option("--k-fraction", lts.k_fraction, "Fraction of largest losses trimmed");
  lts_cmd->add_option("--seed", lts.seed, "Random seed");
  lts_cmd->add_option("--steps", lts.steps, "Gradient descent steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (app.got_subcommand("sort")) return run_apply(sort_args);
  if (app.got_subcommand("rank")) return run_apply(rank_args);
  if (app.got_subcommand("bench")) return cmd_bench(bench, std::cout, std::cerr);
  if (app.got_subcommand("gradcheck")) return cmd_gradcheck(grad, std::cout, std::cerr);
  if (app.got_subcommand("lts-demo")) {
    if (eps_opt->count() > 0) lts.epsilon = lts_eps;
    return cmd_lts_demo(lts, std::cout, std::cerr);
  }
  return kExitUsage;
}
