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

#include "kanon/partition.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <string>

#include "kanon/errors.h"

namespace kanon {

NanPattern pattern_of(const Dataset& dataset, const QidSpace& qids, RecordId r) {
  NanPattern p = 0;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (!dataset.column(qids[q].column).is_missing(r)) p |= NanPattern{1} << q;
  }
  return p;
}

Partition::Partition(const Dataset& dataset, const QidSpace& qids, std::vector<RecordId> ids,
                     NanPattern pattern)
    : ids_(std::move(ids)), pattern_(pattern), stats_(qids.size()) {
  if (ids_.empty()) throw ContractViolation("partition must not be empty");
  assert(std::is_sorted(ids_.begin(), ids_.end()));
  std::vector<double> values;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    QidStats& st = stats_[q];
    st.present = pattern_has(pattern_, q);
    if (!st.present) continue;
    const Column& col = dataset.column(qids[q].column);
    for (RecordId r : ids_) {
      if (col.is_missing(r)) {
        throw ContractViolation("record " + std::to_string(r) + " is missing '" + qids[q].name +
                                "' but the partition pattern has it present");
      }
    }
    if (col.kind() == ColumnKind::kNumeric) {
      values.clear();
      values.reserve(ids_.size());
      for (RecordId r : ids_) values.push_back(col.number(r));
      std::sort(values.begin(), values.end());
      NumericStats& ns = st.numeric;
      ns.count = values.size();
      ns.min = values.front();
      ns.max = values.back();
      double sum = 0;
      for (double v : values) sum += v;
      ns.mean = sum / static_cast<double>(values.size());
      double m2 = 0;
      for (double v : values) m2 += (v - ns.mean) * (v - ns.mean);
      ns.stddev = std::sqrt(m2 / static_cast<double>(values.size()));
      ns.distinct = static_cast<std::size_t>(
          std::unique(values.begin(), values.end()) - values.begin());
    } else {
      std::vector<bool> seen(col.labels().size(), false);
      for (RecordId r : ids_) seen[col.code(r)] = true;
      for (std::size_t c = 0; c < seen.size(); ++c) {
        if (seen[c]) st.codes.push_back(static_cast<std::int32_t>(c));
      }
    }
  }
}

std::vector<Partition> nan_pattern_partition(const Dataset& dataset, const QidSpace& qids) {
  std::map<NanPattern, std::vector<RecordId>> groups;
  for (RecordId r = 0; r < dataset.size(); ++r) {
    groups[pattern_of(dataset, qids, r)].push_back(r);
  }
  std::vector<std::pair<NanPattern, std::vector<RecordId>>> ordered(
      std::make_move_iterator(groups.begin()), std::make_move_iterator(groups.end()));
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return a.second.size() > b.second.size();
  });
  std::vector<Partition> out;
  out.reserve(ordered.size());
  for (auto& [pattern, ids] : ordered) {
    out.emplace_back(dataset, qids, std::move(ids), pattern);
  }
  return out;
}

std::vector<Partition> split(const Dataset& dataset, const QidSpace& qids,
                             const Partition& parent, std::span<const int> assignment) {
  if (assignment.size() != parent.size()) {
    throw ContractViolation("assignment must cover every partition member");
  }
  int labels = 0;
  for (int a : assignment) {
    if (a < 0) throw ContractViolation("negative child label");
    labels = std::max(labels, a + 1);
  }
  std::vector<std::vector<RecordId>> buckets(labels);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    buckets[assignment[i]].push_back(parent.ids()[i]);
  }
  std::vector<Partition> children;
  for (auto& b : buckets) {
    if (!b.empty()) children.emplace_back(dataset, qids, std::move(b), parent.pattern());
  }
  return children;
}

std::optional<Interval> qid_range(const Partition& partition, const QidSpace& qids,
                                  std::size_t qid) {
  if (qid >= qids.size()) throw LookupError("QID index out of range");
  if (qids[qid].kind != ColumnKind::kNumeric) {
    throw ArgumentError("QID '" + qids[qid].name + "' is not numeric");
  }
  if (!partition.present(qid)) return std::nullopt;
  const auto& ns = partition.stats(qid).numeric;
  return Interval{ns.min, ns.max};
}

std::optional<Interval> qid_range(const Partition& partition, const QidSpace& qids,
                                  std::string_view qid_name) {
  auto q = qids.index_of(qid_name);
  if (!q) throw LookupError("unknown QID '" + std::string(qid_name) + "'");
  return qid_range(partition, qids, *q);
}

}  // namespace kanon
