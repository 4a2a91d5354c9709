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

#include "kanon/qid_space.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kanon/errors.h"

namespace kanon {

QidSpace QidSpace::build(const Dataset& dataset, const GTreeMap& gtrees,
                         const std::vector<PercentilePair>& pairs) {
  QidSpace space;
  for (std::size_t c : dataset.schema().qid_columns()) {
    const Column& col = dataset.column(c);
    QidInfo info;
    info.column = c;
    info.name = dataset.spec(c).name;
    info.kind = col.kind();
    if (info.kind == ColumnKind::kNumeric) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (double v : col.numbers()) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (lo <= hi) {
        info.domain = {lo, hi};
        info.ladder = DomainLadder::build(col.numbers(), pairs);
      }
    } else {
      std::vector<bool> seen(col.labels().size(), false);
      for (auto code : col.codes()) {
        if (code != Column::kMissingCode) seen[code] = true;
      }
      std::vector<std::string> observed;
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i]) observed.push_back(col.labels()[i]);
      }
      if (auto it = gtrees.find(info.name); it != gtrees.end()) {
        info.gtree = it->second;
      } else if (!observed.empty()) {
        info.gtree = std::make_shared<const GTree>(GTree::flat(observed));
      }
      if (info.gtree) {
        info.leaf_of_code.assign(col.labels().size(), -1);
        for (std::size_t i = 0; i < seen.size(); ++i) {
          if (!seen[i]) continue;
          if (!info.gtree->has_leaf(col.labels()[i])) {
            throw StructureError("value '" + col.labels()[i] + "' of column '" + info.name +
                                 "' is not a leaf of its gtree");
          }
          info.leaf_of_code[i] = info.gtree->leaf(col.labels()[i]);
        }
      }
    }
    space.qids_.push_back(std::move(info));
  }
  return space;
}

std::optional<std::size_t> QidSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < qids_.size(); ++i) {
    if (qids_[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace kanon
