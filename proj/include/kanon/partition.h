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
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kanon/dataset.h"
#include "kanon/hierarchy.h"
#include "kanon/qid_space.h"

namespace kanon {

// Bit i set <=> QID i is present.
using NanPattern = std::uint64_t;

inline bool pattern_has(NanPattern pattern, std::size_t qid) {
  return (pattern >> qid) & 1u;
}

NanPattern pattern_of(const Dataset& dataset, const QidSpace& qids, RecordId r);

struct NumericStats {
  double min = 0;
  double max = 0;
  double mean = 0;
  double stddev = 0;  // population
  std::size_t count = 0;
  std::size_t distinct = 0;
};

struct QidStats {
  bool present = false;
  NumericStats numeric;
  // Categorical: sorted distinct dictionary codes.
  std::vector<std::int32_t> codes;
};

// A set of records sharing one NanPattern, with per-QID statistics computed
// at construction. Immutable.
class Partition {
 public:
  // `ids` must be sorted, duplicate-free and non-empty; every record must
  // match `pattern`.
  Partition(const Dataset& dataset, const QidSpace& qids, std::vector<RecordId> ids,
            NanPattern pattern);

  const std::vector<RecordId>& ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  NanPattern pattern() const { return pattern_; }
  bool present(std::size_t qid) const { return pattern_has(pattern_, qid); }
  const QidStats& stats(std::size_t qid) const { return stats_[qid]; }

 private:
  std::vector<RecordId> ids_;
  NanPattern pattern_ = 0;
  std::vector<QidStats> stats_;
};

// Groups all records by NanPattern. Output is ordered by descending size,
// ties by ascending pattern value.
std::vector<Partition> nan_pattern_partition(const Dataset& dataset, const QidSpace& qids);

// Materializes a cut. `assignment[i]` is the child label of ids()[i]; labels
// are non-negative. Children come back in ascending label order; empty labels
// are dropped.
std::vector<Partition> split(const Dataset& dataset, const QidSpace& qids,
                             const Partition& parent, std::span<const int> assignment);

// [min, max] of a numeric QID, or nullopt when the QID is missing under the
// partition's pattern. Throws ArgumentError for categorical QIDs.
std::optional<Interval> qid_range(const Partition& partition, const QidSpace& qids,
                                  std::size_t qid);
std::optional<Interval> qid_range(const Partition& partition, const QidSpace& qids,
                                  std::string_view qid_name);

}  // namespace kanon
