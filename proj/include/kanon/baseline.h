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
#include <vector>

#include "kanon/dataset.h"
#include "kanon/engine.h"
#include "kanon/metrics.h"
#include "kanon/qid_space.h"

namespace kanon {

// Single-threaded multidimensional median partitioning without suppression.
// At each partition the QIDs are tried in order of normalized range (range
// over full column range, largest first, ties by column order); the first
// one whose lower-median cut leaves at least k records on both sides is
// used. A partition with no such cut becomes a class. Classes come back in
// left-first depth-first order.
//
// Throws SchemaError if a QID is categorical, ArgumentError on a missing QID
// value or k < 1.
std::vector<std::vector<RecordId>> original_mondrian(const Dataset& dataset,
                                                     const QidSpace& qids, int k);

struct ComparisonRow {
  std::string qid_set;
  std::size_t dims = 0;
  int k = 0;
  MetricsReport core;
  MetricsReport baseline;
};

// For every (QID set, k): runs the engine and the baseline on `dataset`
// restricted to that numeric QID set. `engine` supplies everything except k.
std::vector<ComparisonRow> compare_runs(const Dataset& dataset,
                                        const std::vector<std::vector<std::string>>& qid_sets,
                                        const std::vector<int>& ks, const EngineConfig& engine);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace kanon
