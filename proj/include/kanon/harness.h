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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kanon/config.h"
#include "kanon/dataset.h"
#include "kanon/engine.h"
#include "kanon/metrics.h"
#include "kanon/qid_space.h"

namespace kanon {

// Standard ADULT QID sets of 4, 6 and 8 attributes.
std::vector<std::string> standard_qid_set(int dims);
// age, hours-per-week, capital-gain, capital-loss.
std::vector<std::string> numeric_qids();
// {age} for one dimension; every d-subset of numeric_qids() otherwise.
std::vector<std::vector<std::string>> numeric_qid_sets(int dims);

std::string join_names(const std::vector<std::string>& names);

struct CoreRun {
  AnonymizeResult result;
  MetricsReport metrics;
};

// One timed engine run over `dataset` with `qids` as the QID set.
CoreRun run_core(const Dataset& dataset, const std::vector<std::string>& qids,
                 const GTreeMap& gtrees, const std::vector<PercentilePair>& pairs, int k,
                 const EngineConfig& engine);

MetricsReport run_baseline(const Dataset& dataset, const std::vector<std::string>& qids, int k);

struct BenchRow {
  std::vector<std::pair<std::string, std::string>> keys;
  MetricsReport metrics;
};

std::vector<std::string_view> bench_suites();

// kgrid: DM/RILM over k for the 4-dimensional numeric set, engine and baseline.
// dims: the 4/6/8 standard sets at the configured k.
// cutoff: suppression and runtime over recursive cutoffs.
// parallel: runtime over worker counts.
// scale: metrics over replication factors.
// `dataset` must type every column the suite touches. ArgumentError for an
// unknown suite.
std::vector<BenchRow> run_bench(std::string_view suite, const Dataset& dataset,
                                const GTreeMap& gtrees, const RunConfig& config);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace kanon
