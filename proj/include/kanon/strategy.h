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
#include <vector>

#include "kanon/funnel.h"
#include "kanon/hierarchy.h"
#include "kanon/partition.h"

namespace kanon {

// Privacy-model hooks the engine consults. Implementations must be pure
// functions of (partition, dataset, configuration): the engine calls them
// concurrently from several workers.
class PrivacyStrategy {
 public:
  virtual ~PrivacyStrategy() = default;

  // Candidate QIDs for splitting, best first.
  virtual std::vector<QidScore> cut_choices(const Partition& partition) const = 0;
  virtual std::vector<ProposedCut> propose_cuts(const Partition& partition,
                                                std::size_t qid) const = 0;
  virtual bool is_valid_class(const Partition& partition) const = 0;
  // Generalized value per QID, in QID order. Requires is_valid_class().
  virtual std::vector<GeneralizedValue> finalize(const Partition& partition) const = 0;

  // Funnel parameters used to score this strategy's proposals.
  virtual const FunnelContext& funnel() const = 0;
};

class KAnonymityStrategy final : public PrivacyStrategy {
 public:
  KAnonymityStrategy(const Dataset& dataset, const QidSpace& qids, int k,
                     NumericCutConfig numeric = {});

  int k() const { return context_.k; }

  // Ranked QIDs that still hold two or more distinct values. A QID already
  // narrowed to one value (a gtree leaf, a single number) offers no cut.
  std::vector<QidScore> cut_choices(const Partition& partition) const override;
  std::vector<ProposedCut> propose_cuts(const Partition& partition,
                                        std::size_t qid) const override;
  bool has_cut(const Partition& partition, std::size_t qid) const;
  bool is_valid_class(const Partition& partition) const override;
  std::vector<GeneralizedValue> finalize(const Partition& partition) const override;
  const FunnelContext& funnel() const override { return context_; }

 private:
  FunnelContext context_;
};

}  // namespace kanon
