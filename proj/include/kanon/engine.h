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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kanon/budget.h"
#include "kanon/dataset.h"
#include "kanon/funnel.h"
#include "kanon/qid_space.h"
#include "kanon/strategy.h"
#include "kanon/tree.h"

namespace kanon {

struct EngineConfig {
  // Children with at least this many records are deferred to the task queue;
  // smaller ones are recursed in-task.
  std::size_t recursive_partition_size_cutoff = 1000;
  int worker_count = 1;
  NumericCutConfig numeric;
  BreakoutConfig breakout;
  double p_min = 0.99;
  double multiplier = 1.0;
  // 0 = try every budget-eligible candidate.
  std::size_t max_cut_attempts = 0;
  bool trace_funnel = false;

  // Throws ArgumentError on out-of-range values.
  void validate() const;
};

enum class Executor {
  // Single-threaded FIFO loop, stitching each result as it completes.
  kSerialReference,
  // Central queue drained by an OpenMP worker team.
  kParallel,
};

struct EquivalenceClass {
  std::vector<GeneralizedValue> values;
  std::size_t size = 0;
};

struct BudgetReport {
  std::size_t s_max = 0;
  std::size_t suppressed = 0;
  // Records of NaN-pattern groups too small to form a class.
  std::size_t forced_suppressed = 0;
  bool warning = false;
};

// Classes merge leaves whose generalized QID tuples render identically, in
// first-seen order of a depth-first walk.
struct AnonymizedOutput {
  std::size_t n_records = 0;
  std::vector<EquivalenceClass> classes;
  // Per record: index into `classes`, or -1 when suppressed.
  std::vector<std::int32_t> class_of;
  std::vector<RecordId> suppressed;
  BudgetReport budget;
  FunnelStats funnel;
};

struct AnonymizeResult {
  MondrianTree tree;
  AnonymizedOutput output;
};

// Outcome of processing one queued partition.
struct TaskResult {
  TreeNode subtree;
  FunnelStats funnel;
  std::size_t charged = 0;
  std::size_t forced_suppressed = 0;
};

// Runs make_cut for one task against a task-local budget. Stateless apart
// from the budget and funnel counters it owns.
class TaskRunner {
 public:
  TaskRunner(const Dataset& dataset, const QidSpace& qids, const PrivacyStrategy& strategy,
             const EngineConfig& config, std::size_t global_s_max, std::size_t allocation);

  TreeNode make_cut(const Partition& partition, const NodePath& id);

  const SuppressionBudget& budget() const { return budget_; }
  const FunnelStats& funnel() const { return funnel_; }
  std::size_t forced_suppressed() const { return forced_; }
  // Number of candidate cuts abandoned after charging overdrew the budget.
  std::size_t rollbacks() const { return rollbacks_; }

  // Local gate for a partition of `size` records: its proportional share of
  // the global budget.
  std::size_t local_allowance(std::size_t size) const;

 private:
  std::optional<TreeNode> try_cut(const Partition& partition, const NodePath& id,
                                  const ScoredCut& candidate);

  const Dataset& dataset_;
  const QidSpace& qids_;
  const PrivacyStrategy& strategy_;
  const EngineConfig& config_;
  std::size_t global_s_max_;
  SuppressionBudget budget_;
  FunnelStats funnel_;
  std::size_t forced_ = 0;
  std::size_t rollbacks_ = 0;
};

TaskResult run_task(const Dataset& dataset, const QidSpace& qids, const PrivacyStrategy& strategy,
                    const EngineConfig& config, std::size_t global_s_max, const NodePath& id,
                    const Partition& partition, std::size_t allocation);

// Pre-partitions by NaN pattern, allocates root budgets, and drains the
// deferred-task queue. Output is independent of worker count and executor.
AnonymizeResult anonymize(const Dataset& dataset, const QidSpace& qids,
                          const PrivacyStrategy& strategy, const EngineConfig& config,
                          Executor executor = Executor::kParallel);

// Resolves classes and suppressed records. ContractViolation if the tree
// still contains deferred nodes.
AnonymizedOutput extract_output(const MondrianTree& tree, const Dataset& dataset,
                                const QidSpace& qids);

// Builds an output from explicit classes (used for the baseline).
AnonymizedOutput output_from_classes(const Dataset& dataset, const QidSpace& qids,
                                     const std::vector<std::vector<RecordId>>& classes);

std::string render_value(const QidSpace& qids, std::size_t qid, const GeneralizedValue& value);

// Rows in record order. QID cells carry the rendered generalized value;
// other columns pass through. Suppressed records are omitted unless
// `emit_suppressed`, in which case every QID cell reads "*".
void write_anonymized_csv(std::ostream& out, const Dataset& dataset, const QidSpace& qids,
                          const AnonymizedOutput& output, bool emit_suppressed);

}  // namespace kanon
