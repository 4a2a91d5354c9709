// Copyright 2026 The kanon Authors
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

// kanon: command-line front end for the anonymizer and benchmark harness.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kanon/baseline.h"
#include "kanon/config.h"
#include "kanon/engine.h"
#include "kanon/errors.h"
#include "kanon/funnel.h"
#include "kanon/harness.h"
#include "kanon/metrics.h"
#include "kanon/strategy.h"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> k, workers, cutoff, cut_mode, bins, p_min, multiplier,
      breakout_threshold, replicate, out_dir;
  bool emit_suppressed = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value run configuration")->required();
  cmd->add_option("--k", o.k, "anonymity parameter");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--cutoff", o.cutoff, "recursive partition size cutoff");
  cmd->add_option("--cut-mode", o.cut_mode, "numeric cut mode")
      ->check(CLI::IsMember({"median", "binedge"}));
  cmd->add_option("--bins", o.bins, "bins for binedge mode");
  cmd->add_option("--p-min", o.p_min, "minimum retained fraction");
  cmd->add_option("--multiplier", o.multiplier, "suppression budget multiplier");
  cmd->add_option("--breakout-threshold", o.breakout_threshold,
                  "enable dynamic breakout at this loss threshold");
  cmd->add_option("--replicate", o.replicate, "replicate the dataset N times");
  cmd->add_flag("--emit-suppressed", o.emit_suppressed, "write suppressed rows with '*' QIDs");
  cmd->add_option("--out-dir", o.out_dir, "output directory");
}

kanon::RunConfig resolve_config(const Overrides& o) {
  auto config = kanon::load_run_config(o.config);
  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (v) config.set(key, *v, fs::current_path());
  };
  set("k", o.k);
  set("workers", o.workers);
  set("cutoff", o.cutoff);
  set("cut_mode", o.cut_mode);
  set("bins", o.bins);
  set("p_min", o.p_min);
  set("multiplier", o.multiplier);
  if (o.breakout_threshold) {
    config.set("breakout", "true");
    set("breakout_threshold", o.breakout_threshold);
  }
  set("replicate", o.replicate);
  set("out_dir", o.out_dir);
  if (o.emit_suppressed) config.emit_suppressed = true;
  config.validate();
  return config;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kanon::FileError("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

struct Run {
  kanon::RunInputs inputs;
  kanon::AnonymizeResult result;
  kanon::MetricsReport metrics;
};

Run run_anonymize(const kanon::RunConfig& config) {
  auto inputs = kanon::load_inputs(config);
  kanon::KAnonymityStrategy strategy(inputs.dataset, inputs.qids, config.k,
                                     config.engine.numeric);
  const auto t0 = std::chrono::steady_clock::now();
  auto result = kanon::anonymize(inputs.dataset, inputs.qids, strategy, config.engine);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto metrics = kanon::summarize(result.output, inputs.qids, elapsed);
  return {std::move(inputs), std::move(result), metrics};
}

int cmd_anonymize(const Overrides& o) {
  const auto config = resolve_config(o);
  const auto run = run_anonymize(config);
  fs::create_directories(config.out_dir);
  {
    auto out = open_out(config.out_dir / "anonymized.csv");
    kanon::write_anonymized_csv(out, run.inputs.dataset, run.inputs.qids, run.result.output,
                                config.emit_suppressed);
  }
  auto metrics = kanon::metrics_json(run.metrics);
  metrics["config"] = config.effective_json();
  write_json(config.out_dir / "metrics.json", metrics);
  write_json(config.out_dir / "timing.json",
             {{"runtime_seconds", run.metrics.runtime_seconds},
              {"worker_count", config.engine.worker_count}});
  {
    auto out = open_out(config.out_dir / "funnel.csv");
    kanon::write_funnel_csv(out, run.result.output.funnel);
  }
  std::cout << "records " << run.metrics.n_records << ", classes " << run.metrics.class_count
            << ", suppressed " << run.metrics.suppressed << ", DM " << run.metrics.dm
            << ", RILM " << kanon::format_number(run.metrics.rilm) << ", "
            << kanon::format_number(run.metrics.runtime_seconds) << " s\n";
  if (run.metrics.budget_warning) {
    std::cerr << "warning: " << run.metrics.forced_suppressed
              << " records force-suppressed in missing-value groups smaller than k\n";
  }
  return 0;
}

int cmd_funnel_stats(const Overrides& o) {
  auto config = resolve_config(o);
  config.engine.trace_funnel = true;
  const auto run = run_anonymize(config);
  fs::create_directories(config.out_dir);
  {
    auto out = open_out(config.out_dir / "funnel.csv");
    kanon::write_funnel_csv(out, run.result.output.funnel);
  }
  {
    auto out = open_out(config.out_dir / "funnel_trace.csv");
    kanon::write_funnel_trace_csv(out, run.result.output.funnel);
  }
  kanon::write_funnel_csv(std::cout, run.result.output.funnel);
  std::cout << "decisions " << run.result.output.funnel.decisions
            << ", monotonicity violations " << run.result.output.funnel.monotonicity_violations
            << '\n';
  return run.result.output.funnel.monotonicity_violations == 0 ? 0 : 1;
}

kanon::Dataset load_full(const kanon::RunConfig& config) {
  auto ds = kanon::load_dataset(config.dataset, config.schema());
  if (config.replicate > 1) ds = kanon::replicate(ds, config.replicate);
  return ds;
}

int cmd_bench(const Overrides& o, const std::string& suite) {
  const auto config = resolve_config(o);
  const auto gtrees = kanon::load_gtrees(config);
  const auto dataset = load_full(config);
  const auto rows = kanon::run_bench(suite, dataset, gtrees, config);
  fs::create_directories(config.out_dir);
  const auto path = config.out_dir / ("bench_" + suite + ".csv");
  {
    auto out = open_out(path);
    kanon::write_bench_csv(out, rows);
  }
  kanon::write_bench_csv(std::cout, rows);
  return 0;
}

int cmd_baseline_compare(const Overrides& o, const std::vector<std::string>& qids) {
  const auto config = resolve_config(o);
  std::vector<std::vector<std::string>> sets;
  if (!qids.empty()) {
    for (const auto& q : qids) {
      if (std::find(config.numeric.begin(), config.numeric.end(), q) == config.numeric.end()) {
        throw CLI::ValidationError("--qids",
                                   "'" + q + "' is not numeric; the baseline is numeric-only");
      }
    }
    sets.push_back(qids);
  } else {
    for (int d = 1; d <= 4; ++d) {
      for (auto& s : kanon::numeric_qid_sets(d)) sets.push_back(std::move(s));
    }
  }
  const auto dataset = load_full(config);
  const auto rows = kanon::compare_runs(dataset, sets, {5, 10, 25, 50, 100, 250, 500, 1000},
                                        config.engine);
  fs::create_directories(config.out_dir);
  {
    auto out = open_out(config.out_dir / "baseline_compare.csv");
    kanon::write_comparison_csv(out, rows);
  }
  kanon::write_comparison_csv(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partition-based k-anonymizer"};
  app.require_subcommand(1);

  Overrides anon_o, bench_o, cmp_o, funnel_o;
  auto* anon = app.add_subcommand("anonymize", "anonymize a dataset");
  add_common(anon, anon_o);

  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite;
  bench->add_option("suite", suite, "kgrid | dims | cutoff | parallel | scale")
      ->required()
      ->check(CLI::IsMember({"kgrid", "dims", "cutoff", "parallel", "scale"}));
  add_common(bench, bench_o);

  auto* cmp = app.add_subcommand("baseline-compare", "engine vs baseline on numeric QID sets");
  std::vector<std::string> cmp_qids;
  cmp->add_option("--qids", cmp_qids, "one numeric QID set (default: all 1-4 sets)")
      ->delimiter(',');
  add_common(cmp, cmp_o);

  auto* funnel = app.add_subcommand("funnel-stats", "per-stage cut funnel statistics");
  add_common(funnel, funnel_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (anon->parsed()) return cmd_anonymize(anon_o);
    if (bench->parsed()) return cmd_bench(bench_o, suite);
    if (cmp->parsed()) return cmd_baseline_compare(cmp_o, cmp_qids);
    if (funnel->parsed()) return cmd_funnel_stats(funnel_o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const kanon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
