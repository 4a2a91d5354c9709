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

#include "kanon/harness.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <ostream>

#include "kanon/baseline.h"
#include "kanon/errors.h"
#include "kanon/strategy.h"

namespace kanon {

std::vector<std::string> standard_qid_set(int dims) {
  switch (dims) {
    case 4:
      return {"age", "race", "sex", "workclass"};
    case 6:
      return {"age", "marital-status", "occupation", "native-country", "sex", "workclass"};
    case 8:
      return {"age",       "marital-status", "occupation",     "native-country",
              "sex",       "workclass",      "hours-per-week", "capital-gain"};
    default:
      throw ArgumentError("no standard QID set with " + std::to_string(dims) + " attributes");
  }
}

std::vector<std::string> numeric_qids() {
  return {"age", "hours-per-week", "capital-gain", "capital-loss"};
}

std::vector<std::vector<std::string>> numeric_qid_sets(int dims) {
  const auto all = numeric_qids();
  if (dims < 1 || dims > static_cast<int>(all.size())) {
    throw ArgumentError("numeric QID sets have 1 to 4 attributes");
  }
  if (dims == 1) return {{"age"}};
  std::vector<std::vector<std::string>> out;
  for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
    if (std::popcount(mask) != dims) continue;
    std::vector<std::string> set;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask & (1u << i)) set.push_back(all[i]);
    }
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += '+';
    out += names[i];
  }
  return out;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CoreRun run_core(const Dataset& dataset, const std::vector<std::string>& qids,
                 const GTreeMap& gtrees, const std::vector<PercentilePair>& pairs, int k,
                 const EngineConfig& engine) {
  const Dataset ds = with_qids(dataset, qids);
  const QidSpace space = QidSpace::build(ds, gtrees, pairs);
  KAnonymityStrategy strategy(ds, space, k, engine.numeric);
  const auto t0 = std::chrono::steady_clock::now();
  auto result = anonymize(ds, space, strategy, engine);
  const double elapsed = seconds_since(t0);
  auto metrics = summarize(result.output, space, elapsed);
  return {std::move(result), metrics};
}

MetricsReport run_baseline(const Dataset& dataset, const std::vector<std::string>& qids, int k) {
  const Dataset ds = with_qids(dataset, qids);
  const QidSpace space = QidSpace::build(ds);
  const auto t0 = std::chrono::steady_clock::now();
  const auto classes = original_mondrian(ds, space, k);
  const double elapsed = seconds_since(t0);
  return summarize(output_from_classes(ds, space, classes), space, elapsed);
}

std::vector<std::string_view> bench_suites() {
  return {"kgrid", "dims", "cutoff", "parallel", "scale"};
}

std::vector<BenchRow> run_bench(std::string_view suite, const Dataset& dataset,
                                const GTreeMap& gtrees, const RunConfig& config) {
  std::vector<BenchRow> rows;
  const auto& pairs = config.percentiles;
  const std::string qid_label = join_names(config.qids);
  if (suite == "kgrid") {
    const auto set = numeric_qids();
    for (int k : {5, 10, 25, 50, 100, 250, 500, 1000}) {
      const auto core = run_core(dataset, set, gtrees, pairs, k, config.engine);
      rows.push_back({{{"algorithm", "core"}, {"qid_set", join_names(set)},
                       {"k", std::to_string(k)}},
                      core.metrics});
      rows.push_back({{{"algorithm", "baseline"}, {"qid_set", join_names(set)},
                       {"k", std::to_string(k)}},
                      run_baseline(dataset, set, k)});
    }
  } else if (suite == "dims") {
    for (int dims : {4, 6, 8}) {
      const auto set = standard_qid_set(dims);
      const auto core = run_core(dataset, set, gtrees, pairs, config.k, config.engine);
      rows.push_back({{{"dims", std::to_string(dims)}, {"qid_set", join_names(set)},
                       {"k", std::to_string(config.k)}},
                      core.metrics});
    }
  } else if (suite == "cutoff") {
    for (std::size_t cutoff : {10, 50, 100, 500, 1000, 5000}) {
      EngineConfig engine = config.engine;
      engine.recursive_partition_size_cutoff = cutoff;
      const auto core = run_core(dataset, config.qids, gtrees, pairs, config.k, engine);
      rows.push_back({{{"cutoff", std::to_string(cutoff)}, {"qid_set", qid_label},
                       {"k", std::to_string(config.k)}},
                      core.metrics});
    }
  } else if (suite == "parallel") {
    double base = 0;
    for (int workers : {1, 2, 4, 8}) {
      EngineConfig engine = config.engine;
      engine.worker_count = workers;
      const auto core = run_core(dataset, config.qids, gtrees, pairs, config.k, engine);
      if (workers == 1) base = core.metrics.runtime_seconds;
      const double speedup =
          core.metrics.runtime_seconds > 0 ? base / core.metrics.runtime_seconds : 0.0;
      rows.push_back({{{"workers", std::to_string(workers)},
                       {"speedup", format_number(speedup)},
                       {"qid_set", qid_label},
                       {"k", std::to_string(config.k)}},
                      core.metrics});
    }
  } else if (suite == "scale") {
    for (std::size_t factor : {1, 2, 4}) {
      const Dataset ds = factor == 1 ? dataset : replicate(dataset, factor);
      const auto core = run_core(ds, config.qids, gtrees, pairs, config.k, config.engine);
      rows.push_back({{{"replicate", std::to_string(factor)}, {"qid_set", qid_label},
                       {"k", std::to_string(config.k)}},
                      core.metrics});
    }
  } else {
    throw ArgumentError("unknown bench suite '" + std::string(suite) +
                        "' (expected kgrid, dims, cutoff, parallel or scale)");
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  if (rows.empty()) return;
  for (const auto& [key, value] : rows.front().keys) out << key << ',';
  out << metrics_csv_header() << '\n';
  for (const auto& row : rows) {
    for (const auto& [key, value] : row.keys) out << quote_csv_cell(value) << ',';
    out << metrics_csv_row(row.metrics) << '\n';
  }
}

}  // namespace kanon
