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

#include "kanon/engine.h"

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>

#include "kanon/errors.h"

namespace kanon {

void EngineConfig::validate() const {
  if (recursive_partition_size_cutoff < 1) {
    throw ArgumentError("recursive_partition_size_cutoff must be at least 1");
  }
  if (worker_count < 1) throw ArgumentError("worker_count must be at least 1");
  if (numeric.mode == NumericCutMode::kBinEdges && numeric.bins < 2) {
    throw ArgumentError("bin-edge mode needs at least 2 bins");
  }
  if (!(p_min >= 0.0 && p_min <= 1.0)) throw ArgumentError("p_min must lie in [0, 1]");
  if (!(multiplier >= 0.0)) throw ArgumentError("multiplier must be non-negative");
  if (breakout.enabled && !(breakout.threshold >= 0.0)) {
    throw ArgumentError("breakout threshold must be non-negative");
  }
}

TaskRunner::TaskRunner(const Dataset& dataset, const QidSpace& qids,
                       const PrivacyStrategy& strategy, const EngineConfig& config,
                       std::size_t global_s_max, std::size_t allocation)
    : dataset_(dataset),
      qids_(qids),
      strategy_(strategy),
      config_(config),
      global_s_max_(global_s_max),
      budget_(allocation) {
  funnel_.tracing = config.trace_funnel;
}

std::size_t TaskRunner::local_allowance(std::size_t size) const {
  const std::size_t n = dataset_.size();
  if (n == 0) return 0;
  return static_cast<std::size_t>(static_cast<unsigned __int128>(size) * global_s_max_ / n);
}

namespace {

struct FunnelMark {
  std::size_t decisions;
  DecisionCounts totals;
  std::size_t violations;
  std::size_t trace_size;
};

FunnelMark mark(const FunnelStats& s) {
  return {s.decisions, s.totals, s.monotonicity_violations, s.trace.size()};
}

void restore(FunnelStats& s, const FunnelMark& m) {
  s.decisions = m.decisions;
  s.totals = m.totals;
  s.monotonicity_violations = m.violations;
  s.trace.resize(m.trace_size);
}

NodePath child_path(const NodePath& parent, std::size_t slot) {
  NodePath p = parent;
  p.push_back(static_cast<std::uint32_t>(slot));
  return p;
}

}  // namespace

TreeNode TaskRunner::make_cut(const Partition& partition, const NodePath& id) {
  if (!strategy_.is_valid_class(partition)) {
    budget_.charge(partition.size());
    const bool forced = id.size() == 1;
    if (forced) forced_ += partition.size();
    return TreeNode{id, SuppressedNode{partition, forced}};
  }

  DecisionCounts d;
  auto is_numeric = [&](std::size_t q) { return qids_[q].kind == ColumnKind::kNumeric; };
  const auto ranked = strategy_.cut_choices(partition);
  for (const auto& c : ranked) d[FunnelStage::kChoices].add(is_numeric(c.qid));
  const auto kept = apply_dynamic_breakout(ranked, config_.breakout);
  for (const auto& c : kept) d[FunnelStage::kAfterBreakout].add(is_numeric(c.qid));

  std::vector<ScoredCut> scored;
  for (const auto& c : kept) {
    for (auto& cut : strategy_.propose_cuts(partition, c.qid)) {
      d[FunnelStage::kProposed].add(cut.is_numeric());
      scored.push_back(score_cut(strategy_.funnel(), partition, cut));
    }
  }
  const auto ordered = rank_final_candidates(scored, local_allowance(partition.size()));
  for (const auto& c : ordered) d[FunnelStage::kScored].add(c.cut.is_numeric());

  std::size_t attempts = 0;
  for (const auto& candidate : ordered) {
    if (config_.max_cut_attempts && attempts >= config_.max_cut_attempts) break;
    ++attempts;
    budget_.checkpoint();
    const FunnelMark before = mark(funnel_);
    const std::size_t forced_before = forced_;
    if (auto node = try_cut(partition, id, candidate)) {
      budget_.commit();
      d[FunnelStage::kAccepted].add(candidate.cut.is_numeric());
      funnel_.record(d);
      return std::move(*node);
    }
    budget_.rollback();
    restore(funnel_, before);
    forced_ = forced_before;
    ++rollbacks_;
  }
  funnel_.record(d);
  return TreeNode{id, LeafNode{partition, strategy_.finalize(partition)}};
}

std::optional<TreeNode> TaskRunner::try_cut(const Partition& partition, const NodePath& id,
                                            const ScoredCut& candidate) {
  const auto assignment = candidate.cut.assignment(dataset_, qids_, partition);
  auto children = split(dataset_, qids_, partition, assignment);

  std::vector<std::size_t> order(children.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return children[a].size() > children[b].size();
  });

  enum class Fate { kSuppress, kDefer, kRecurse };
  std::vector<Fate> fate(children.size());
  std::vector<std::size_t> deferred_sizes;
  std::vector<std::size_t> deferred_slots;
  for (std::size_t slot : order) {
    const Partition& c = children[slot];
    if (!strategy_.is_valid_class(c)) {
      fate[slot] = Fate::kSuppress;
      budget_.charge(c.size());
    } else if (c.size() >= config_.recursive_partition_size_cutoff) {
      fate[slot] = Fate::kDefer;
      deferred_slots.push_back(slot);
      deferred_sizes.push_back(c.size());
    } else {
      fate[slot] = Fate::kRecurse;
    }
  }

  const auto live = static_cast<std::size_t>(std::max<std::int64_t>(budget_.remaining(), 0));
  const auto allocations = allocate_proportional(live, partition.size(), deferred_sizes);
  for (std::size_t a : allocations) budget_.charge(a);
  if (budget_.overdrawn()) return std::nullopt;

  InternalNode internal;
  internal.cut = candidate.cut;
  internal.size = partition.size();
  internal.children.resize(children.size());
  for (std::size_t i = 0; i < deferred_slots.size(); ++i) {
    const std::size_t slot = deferred_slots[i];
    internal.children[slot] =
        TreeNode{child_path(id, slot),
                 DeferredNode{std::make_shared<const Partition>(std::move(children[slot])),
                              allocations[i]}};
  }
  for (std::size_t slot : order) {
    if (fate[slot] == Fate::kSuppress) {
      internal.children[slot] =
          TreeNode{child_path(id, slot), SuppressedNode{std::move(children[slot]), false}};
    }
  }
  for (std::size_t slot : order) {
    if (fate[slot] != Fate::kRecurse) continue;
    internal.children[slot] = make_cut(children[slot], child_path(id, slot));
    if (budget_.overdrawn()) return std::nullopt;
  }
  return TreeNode{id, std::move(internal)};
}

TaskResult run_task(const Dataset& dataset, const QidSpace& qids, const PrivacyStrategy& strategy,
                    const EngineConfig& config, std::size_t global_s_max, const NodePath& id,
                    const Partition& partition, std::size_t allocation) {
  TaskRunner runner(dataset, qids, strategy, config, global_s_max, allocation);
  TaskResult result{runner.make_cut(partition, id), {}, 0, 0};
  result.funnel = runner.funnel();
  result.charged = runner.budget().charged();
  result.forced_suppressed = runner.forced_suppressed();
  return result;
}

namespace {

struct Task {
  NodePath id;
  std::shared_ptr<const Partition> partition;
  std::size_t allocation = 0;
};

void collect_deferred(const TreeNode& node, std::vector<Task>& out) {
  if (const auto* d = std::get_if<DeferredNode>(&node.body)) {
    out.push_back({node.id, d->partition, d->allocation});
  } else if (const auto* in = std::get_if<InternalNode>(&node.body)) {
    for (const auto& c : in->children) collect_deferred(c, out);
  }
}

struct Executed {
  NodePath id;
  TaskResult result;
};

class Engine {
 public:
  Engine(const Dataset& dataset, const QidSpace& qids, const PrivacyStrategy& strategy,
         const EngineConfig& config, std::size_t s_max)
      : dataset_(dataset), qids_(qids), strategy_(strategy), config_(config), s_max_(s_max) {}

  TaskResult run(const Task& t) const {
    return run_task(dataset_, qids_, strategy_, config_, s_max_, t.id, *t.partition,
                    t.allocation);
  }

  // FIFO loop on the calling thread.
  std::vector<Executed> serial(MondrianTree& tree, std::deque<Task> queue) const {
    std::vector<Executed> done;
    while (!queue.empty()) {
      Task t = std::move(queue.front());
      queue.pop_front();
      TaskResult r = run(t);
      std::vector<Task> more;
      collect_deferred(r.subtree, more);
      for (auto& m : more) queue.push_back(std::move(m));
      tree.stitch_in_subtree(t.id, std::move(r.subtree));
      r.subtree = TreeNode{};
      done.push_back({t.id, std::move(r)});
    }
    return done;
  }

  // Worker team pulling from one shared queue. A task's deferred children are
  // pushed back as soon as the task finishes.
  std::vector<Executed> parallel(std::deque<Task> queue) const {
    std::mutex mu;
    std::condition_variable cv;
    std::size_t outstanding = queue.size();
    std::vector<Executed> done;
    std::exception_ptr error;

#pragma omp parallel num_threads(config_.worker_count)
    {
      for (;;) {
        Task t;
        {
          std::unique_lock lock(mu);
          cv.wait(lock, [&] { return error || !queue.empty() || outstanding == 0; });
          if (error || queue.empty()) break;
          t = std::move(queue.front());
          queue.pop_front();
        }
        try {
          TaskResult r = run(t);
          std::vector<Task> more;
          collect_deferred(r.subtree, more);
          std::lock_guard lock(mu);
          outstanding += more.size();
          for (auto& m : more) queue.push_back(std::move(m));
          done.push_back({t.id, std::move(r)});
          --outstanding;
        } catch (...) {
          std::lock_guard lock(mu);
          if (!error) error = std::current_exception();
        }
        cv.notify_all();
      }
    }
    if (error) std::rethrow_exception(error);
    return done;
  }

 private:
  const Dataset& dataset_;
  const QidSpace& qids_;
  const PrivacyStrategy& strategy_;
  const EngineConfig& config_;
  std::size_t s_max_;
};

}  // namespace

AnonymizeResult anonymize(const Dataset& dataset, const QidSpace& qids,
                          const PrivacyStrategy& strategy, const EngineConfig& config,
                          Executor executor) {
  config.validate();
  if (dataset.size() == 0) throw ArgumentError("cannot anonymize an empty dataset");

  const std::size_t s_max = global_budget(dataset.size(), config.p_min, config.multiplier);
  auto groups = nan_pattern_partition(dataset, qids);
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) sizes.push_back(g.size());
  const auto allocations = allocate_proportional(s_max, dataset.size(), sizes);

  std::vector<TreeNode> roots;
  std::deque<Task> queue;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto p = std::make_shared<const Partition>(std::move(groups[i]));
    NodePath id{static_cast<std::uint32_t>(i)};
    roots.push_back(TreeNode{id, DeferredNode{p, allocations[i]}});
    queue.push_back({id, p, allocations[i]});
  }
  MondrianTree tree(std::move(roots));

  Engine engine(dataset, qids, strategy, config, s_max);
  std::vector<Executed> done;
  if (executor == Executor::kSerialReference) {
    done = engine.serial(tree, std::move(queue));
  } else {
    done = engine.parallel(std::move(queue));
    // A parent's path is a prefix of its children's, so it sorts first.
    std::sort(done.begin(), done.end(),
              [](const Executed& a, const Executed& b) { return a.id < b.id; });
    for (auto& e : done) {
      tree.stitch_in_subtree(e.id, std::move(e.result.subtree));
    }
  }
  std::sort(done.begin(), done.end(),
            [](const Executed& a, const Executed& b) { return a.id < b.id; });

  AnonymizeResult result{std::move(tree), {}};
  result.output = extract_output(result.tree, dataset, qids);
  FunnelStats funnel;
  funnel.tracing = config.trace_funnel;
  std::size_t forced = 0;
  for (const auto& e : done) {
    funnel.merge(e.result.funnel);
    forced += e.result.forced_suppressed;
  }
  result.output.funnel = std::move(funnel);
  result.output.budget.s_max = s_max;
  if (forced != result.output.budget.forced_suppressed) {
    throw ContractViolation("forced suppression accounting mismatch");
  }
  return result;
}

std::string render_value(const QidSpace& qids, std::size_t qid, const GeneralizedValue& value) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return render_interval(v);
        } else if constexpr (std::is_same_v<T, CategoryNode>) {
          if (!qids[qid].gtree) throw LookupError("QID '" + qids[qid].name + "' has no gtree");
          return qids[qid].gtree->label(v.node);
        } else if constexpr (std::is_same_v<T, Suppressed>) {
          return "*";
        } else {
          return "?";
        }
      },
      value);
}

namespace {

class ClassBuilder {
 public:
  ClassBuilder(const Dataset& dataset, const QidSpace& qids) : qids_(qids) {
    out_.n_records = dataset.size();
    out_.class_of.assign(dataset.size(), kUnassigned);
  }

  void add_class(const std::vector<RecordId>& ids, std::vector<GeneralizedValue> values) {
    std::string key;
    for (std::size_t q = 0; q < values.size(); ++q) {
      key += render_value(qids_, q, values[q]);
      key.push_back('\x1f');
    }
    auto [it, inserted] = index_.try_emplace(std::move(key), out_.classes.size());
    if (inserted) out_.classes.push_back({std::move(values), 0});
    out_.classes[it->second].size += ids.size();
    for (RecordId r : ids) assign(r, static_cast<std::int32_t>(it->second));
  }

  void suppress(const std::vector<RecordId>& ids, bool forced) {
    for (RecordId r : ids) {
      assign(r, -1);
      out_.suppressed.push_back(r);
    }
    if (forced) out_.budget.forced_suppressed += ids.size();
  }

  AnonymizedOutput finish() {
    for (auto c : out_.class_of) {
      if (c == kUnassigned) throw ContractViolation("record not covered by any leaf");
    }
    std::sort(out_.suppressed.begin(), out_.suppressed.end());
    out_.budget.suppressed = out_.suppressed.size();
    out_.budget.warning = out_.budget.forced_suppressed > 0;
    return std::move(out_);
  }

 private:
  static constexpr std::int32_t kUnassigned = -2;

  void assign(RecordId r, std::int32_t c) {
    if (r >= out_.class_of.size()) throw ContractViolation("record id out of range");
    if (out_.class_of[r] != kUnassigned) throw ContractViolation("record in two leaves");
    out_.class_of[r] = c;
  }

  const QidSpace& qids_;
  AnonymizedOutput out_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace

AnonymizedOutput extract_output(const MondrianTree& tree, const Dataset& dataset,
                                const QidSpace& qids) {
  ClassBuilder builder(dataset, qids);
  tree.visit([&](const TreeNode& n) {
    if (const auto* leaf = std::get_if<LeafNode>(&n.body)) {
      builder.add_class(leaf->partition.ids(), leaf->values);
    } else if (const auto* s = std::get_if<SuppressedNode>(&n.body)) {
      builder.suppress(s->partition.ids(), s->forced);
    } else if (n.is_deferred()) {
      throw ContractViolation("deferred node " + format_path(n.id) + " was never resolved");
    }
  });
  return builder.finish();
}

AnonymizedOutput output_from_classes(const Dataset& dataset, const QidSpace& qids,
                                     const std::vector<std::vector<RecordId>>& classes) {
  ClassBuilder builder(dataset, qids);
  for (const auto& ids : classes) {
    if (ids.empty()) throw ArgumentError("empty equivalence class");
    std::vector<GeneralizedValue> values;
    for (std::size_t q = 0; q < qids.size(); ++q) {
      const Column& col = dataset.column(qids[q].column);
      if (qids[q].kind == ColumnKind::kNumeric) {
        Interval range{col.number(ids[0]), col.number(ids[0])};
        bool missing = false;
        for (RecordId r : ids) {
          if (col.is_missing(r)) {
            missing = true;
            break;
          }
          range.lo = std::min(range.lo, col.number(r));
          range.hi = std::max(range.hi, col.number(r));
        }
        if (missing) {
          values.emplace_back(MissingValue{});
        } else {
          values.emplace_back(range);
        }
      } else {
        std::vector<NodeIndex> leaves;
        for (RecordId r : ids) {
          if (col.is_missing(r)) break;
          leaves.push_back(qids[q].leaf_of_code[col.code(r)]);
        }
        if (leaves.size() != ids.size()) {
          values.emplace_back(MissingValue{});
        } else {
          values.emplace_back(CategoryNode{qids[q].gtree->lca(leaves)});
        }
      }
    }
    builder.add_class(ids, std::move(values));
  }
  return builder.finish();
}

void write_anonymized_csv(std::ostream& out, const Dataset& dataset, const QidSpace& qids,
                          const AnonymizedOutput& output, bool emit_suppressed) {
  std::vector<int> qid_of_column(dataset.column_count(), -1);
  for (std::size_t q = 0; q < qids.size(); ++q) {
    qid_of_column[qids[q].column] = static_cast<int>(q);
  }
  for (std::size_t c = 0; c < dataset.column_count(); ++c) {
    if (c) out << ',';
    out << quote_csv_cell(dataset.spec(c).name);
  }
  out << '\n';

  std::vector<std::vector<std::string>> rendered(output.classes.size());
  for (std::size_t i = 0; i < output.classes.size(); ++i) {
    for (std::size_t q = 0; q < qids.size(); ++q) {
      rendered[i].push_back(render_value(qids, q, output.classes[i].values[q]));
    }
  }
  for (RecordId r = 0; r < dataset.size(); ++r) {
    const std::int32_t cls = output.class_of[r];
    if (cls < 0 && !emit_suppressed) continue;
    for (std::size_t c = 0; c < dataset.column_count(); ++c) {
      if (c) out << ',';
      const int q = qid_of_column[c];
      if (q < 0) {
        out << quote_csv_cell(dataset.column(c).text(r));
      } else if (cls < 0) {
        out << '*';
      } else {
        out << quote_csv_cell(rendered[cls][q]);
      }
    }
    out << '\n';
  }
}

}  // namespace kanon
