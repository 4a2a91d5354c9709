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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kanon/dataset.h"
#include "kanon/hierarchy.h"
#include "kanon/partition.h"
#include "kanon/qid_space.h"

namespace kanon {

// Declaration order is the final tie-break order.
enum class CutKind { kMedian = 0, kBinEdge = 1, kGtreeChildren = 2 };

std::string_view to_string(CutKind kind);

enum class NumericCutMode { kMedian, kBinEdges };

struct NumericCutConfig {
  NumericCutMode mode = NumericCutMode::kBinEdges;
  int bins = 8;
};

struct BreakoutConfig {
  bool enabled = false;
  double threshold = 0.75;
};

// A candidate split of one partition along one QID.
struct ProposedCut {
  std::size_t qid = 0;
  CutKind kind = CutKind::kMedian;
  // Numeric cuts: value <= threshold goes to child 0, the rest to child 1.
  double threshold = 0;
  // Categorical cuts: records go to the child of `lca` above their leaf.
  NodeIndex lca = -1;
  std::vector<int> child_of_code;
  int arity = 2;

  bool is_numeric() const { return kind != CutKind::kGtreeChildren; }
  int child_of(const Dataset& dataset, const QidSpace& qids, RecordId r) const;
  std::vector<int> assignment(const Dataset& dataset, const QidSpace& qids,
                              const Partition& partition) const;
};

struct QidScore {
  std::size_t qid = 0;
  double rilm_loss = 0;  // [0, 1], lower is better
};

struct ScoredCut {
  ProposedCut cut;
  double score = 0;  // [-1, 1], negative = tighter children
  std::size_t implied_suppression = 0;
  // Indexed by child label; zero for empty labels.
  std::vector<std::size_t> child_sizes;
};

// Everything the funnel needs besides the partition itself.
struct FunnelContext {
  const Dataset* dataset = nullptr;
  const QidSpace* qids = nullptr;
  int k = 2;
  NumericCutConfig numeric;
};

// Width ratio of a range against the smallest ladder level enclosing it;
// 0 when both widths are 0.
double numeric_loss(const DomainLadder& ladder, const Interval& range);
// (leaves under node - 1) / (leaves under root - 1); 0 for a one-leaf tree.
double categorical_loss(const GTree& gtree, NodeIndex node);

// Pattern-present QIDs ordered by ascending loss, ties by column order.
std::vector<QidScore> rank_cut_choices(const FunnelContext& ctx, const Partition& partition);

// Drops entries whose loss exceeds the threshold; identity when disabled.
std::vector<QidScore> apply_dynamic_breakout(std::vector<QidScore> ranked,
                                             const BreakoutConfig& breakout);

std::vector<ProposedCut> propose_numeric_cuts(const FunnelContext& ctx,
                                              const Partition& partition, std::size_t qid);
std::vector<ProposedCut> propose_categorical_cut(const FunnelContext& ctx,
                                                 const Partition& partition, std::size_t qid);

ScoredCut score_cut(const FunnelContext& ctx, const Partition& partition,
                    const ProposedCut& cut);

// Strict weak order used for final selection: score, then column order,
// threshold, kind.
bool final_cut_before(const ScoredCut& a, const ScoredCut& b);

// Candidates whose implied suppression fits the budget, best first.
std::vector<ScoredCut> rank_final_candidates(std::span<const ScoredCut> candidates,
                                             std::size_t budget_remaining);
std::optional<ScoredCut> select_final_cut(std::span<const ScoredCut> candidates,
                                          std::size_t budget_remaining);

enum class FunnelStage { kChoices = 0, kAfterBreakout, kProposed, kScored, kAccepted };
inline constexpr std::size_t kFunnelStageCount = 5;

std::string_view to_string(FunnelStage stage);

struct StageCounts {
  std::size_t numeric = 0;
  std::size_t categorical = 0;

  std::size_t total() const { return numeric + categorical; }
  void add(bool is_numeric, std::size_t n = 1) { (is_numeric ? numeric : categorical) += n; }
  bool operator==(const StageCounts&) const = default;
};

// Counts for one make-cut decision. `scored` holds the candidates that were
// scored and fit the budget gate, i.e. the final-cut pool.
struct DecisionCounts {
  std::array<StageCounts, kFunnelStageCount> stage{};

  StageCounts& operator[](FunnelStage s) { return stage[static_cast<std::size_t>(s)]; }
  const StageCounts& operator[](FunnelStage s) const {
    return stage[static_cast<std::size_t>(s)];
  }
  // choices >= after_breakout, proposed >= scored >= accepted (per kind),
  // and at most one accepted cut.
  bool monotone() const;
  bool operator==(const DecisionCounts&) const = default;
};

struct FunnelStats {
  std::size_t decisions = 0;
  DecisionCounts totals;
  std::size_t monotonicity_violations = 0;
  bool tracing = false;
  std::vector<DecisionCounts> trace;

  void record(const DecisionCounts& d);
  void merge(const FunnelStats& other);
  bool operator==(const FunnelStats&) const = default;
};

// One row per stage x kind: `stage,kind,count`.
void write_funnel_csv(std::ostream& out, const FunnelStats& stats);
// One row per decision with all ten counters.
void write_funnel_trace_csv(std::ostream& out, const FunnelStats& stats);

}  // namespace kanon
