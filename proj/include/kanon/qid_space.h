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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kanon/dataset.h"
#include "kanon/hierarchy.h"

namespace kanon {

// One quasi-identifier bound to its column and generalization structures.
struct QidInfo {
  std::size_t column = 0;
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;

  // Numeric only. Absent when the column has no present value.
  std::optional<DomainLadder> ladder;
  Interval domain;

  // Categorical only. Null when the column has no present value.
  std::shared_ptr<const GTree> gtree;
  // Dictionary code -> gtree leaf.
  std::vector<NodeIndex> leaf_of_code;
};

using GTreeMap = std::map<std::string, std::shared_ptr<const GTree>, std::less<>>;

// QIDs of a dataset in column order, indexed 0..size()-1. Bit i of a
// NanPattern refers to entry i here.
class QidSpace {
 public:
  // Categorical QIDs without an entry in `gtrees` get a flat gtree over their
  // observed values. Throws StructureError if an observed value is not a leaf
  // of the supplied gtree.
  static QidSpace build(const Dataset& dataset, const GTreeMap& gtrees = {},
                        const std::vector<PercentilePair>& pairs = default_percentile_pairs());

  std::size_t size() const { return qids_.size(); }
  const QidInfo& operator[](std::size_t i) const { return qids_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::vector<QidInfo>& qids() const { return qids_; }

 private:
  std::vector<QidInfo> qids_;
};

}  // namespace kanon
