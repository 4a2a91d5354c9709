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

#include "kanon/strategy.h"

#include "kanon/errors.h"

namespace kanon {

KAnonymityStrategy::KAnonymityStrategy(const Dataset& dataset, const QidSpace& qids, int k,
                                       NumericCutConfig numeric) {
  if (k < 1) throw ArgumentError("k must be positive");
  context_.dataset = &dataset;
  context_.qids = &qids;
  context_.k = k;
  context_.numeric = numeric;
}

std::vector<QidScore> KAnonymityStrategy::cut_choices(const Partition& partition) const {
  auto ranked = rank_cut_choices(context_, partition);
  std::erase_if(ranked, [&](const QidScore& s) { return !has_cut(partition, s.qid); });
  return ranked;
}

std::vector<ProposedCut> KAnonymityStrategy::propose_cuts(const Partition& partition,
                                                          std::size_t qid) const {
  if ((*context_.qids)[qid].kind == ColumnKind::kNumeric) {
    return propose_numeric_cuts(context_, partition, qid);
  }
  return propose_categorical_cut(context_, partition, qid);
}

bool KAnonymityStrategy::has_cut(const Partition& partition, std::size_t qid) const {
  if (!partition.present(qid)) return false;
  const QidStats& st = partition.stats(qid);
  if ((*context_.qids)[qid].kind == ColumnKind::kNumeric) return st.numeric.distinct >= 2;
  return st.codes.size() >= 2;
}

bool KAnonymityStrategy::is_valid_class(const Partition& partition) const {
  return partition.size() >= static_cast<std::size_t>(context_.k);
}

std::vector<GeneralizedValue> KAnonymityStrategy::finalize(const Partition& partition) const {
  if (!is_valid_class(partition)) {
    throw ContractViolation("finalize called on a partition smaller than k");
  }
  const QidSpace& qids = *context_.qids;
  std::vector<GeneralizedValue> out;
  out.reserve(qids.size());
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (!partition.present(q)) {
      out.emplace_back(MissingValue{});
      continue;
    }
    const QidStats& st = partition.stats(q);
    if (qids[q].kind == ColumnKind::kNumeric) {
      out.emplace_back(Interval{st.numeric.min, st.numeric.max});
    } else {
      std::vector<NodeIndex> leaves;
      for (auto c : st.codes) leaves.push_back(qids[q].leaf_of_code[c]);
      out.emplace_back(CategoryNode{qids[q].gtree->lca(leaves)});
    }
  }
  return out;
}

}  // namespace kanon
