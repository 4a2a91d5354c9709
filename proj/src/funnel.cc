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

#include "kanon/funnel.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kanon/errors.h"

namespace kanon {

std::string_view to_string(CutKind kind) {
  switch (kind) {
    case CutKind::kMedian:
      return "median";
    case CutKind::kBinEdge:
      return "binedge";
    case CutKind::kGtreeChildren:
      return "gtree";
  }
  return "?";
}

std::string_view to_string(FunnelStage stage) {
  switch (stage) {
    case FunnelStage::kChoices:
      return "choices";
    case FunnelStage::kAfterBreakout:
      return "after_breakout";
    case FunnelStage::kProposed:
      return "proposed";
    case FunnelStage::kScored:
      return "scored";
    case FunnelStage::kAccepted:
      return "accepted";
  }
  return "?";
}

int ProposedCut::child_of(const Dataset& dataset, const QidSpace& qids, RecordId r) const {
  const Column& col = dataset.column(qids[qid].column);
  if (is_numeric()) return col.number(r) <= threshold ? 0 : 1;
  return child_of_code[col.code(r)];
}

std::vector<int> ProposedCut::assignment(const Dataset& dataset, const QidSpace& qids,
                                         const Partition& partition) const {
  std::vector<int> out;
  out.reserve(partition.size());
  for (RecordId r : partition.ids()) out.push_back(child_of(dataset, qids, r));
  return out;
}

double numeric_loss(const DomainLadder& ladder, const Interval& range) {
  const Interval& domain = ladder.smallest_enclosing(range);
  if (domain.width() <= 0) return 0;
  return std::clamp(range.width() / domain.width(), 0.0, 1.0);
}

double categorical_loss(const GTree& gtree, NodeIndex node) {
  const int total = gtree.leaf_count(gtree.root());
  if (total <= 1) return 0;
  return static_cast<double>(gtree.leaf_count(node) - 1) / static_cast<double>(total - 1);
}

namespace {

NodeIndex observed_lca(const QidInfo& info, const QidStats& st) {
  std::vector<NodeIndex> leaves;
  leaves.reserve(st.codes.size());
  for (auto c : st.codes) leaves.push_back(info.leaf_of_code[c]);
  return info.gtree->lca(leaves);
}

}  // namespace

std::vector<QidScore> rank_cut_choices(const FunnelContext& ctx, const Partition& partition) {
  const QidSpace& qids = *ctx.qids;
  std::vector<QidScore> out;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (!partition.present(q)) continue;
    const QidStats& st = partition.stats(q);
    double loss = 0;
    if (qids[q].kind == ColumnKind::kNumeric) {
      loss = numeric_loss(*qids[q].ladder, {st.numeric.min, st.numeric.max});
    } else {
      loss = categorical_loss(*qids[q].gtree, observed_lca(qids[q], st));
    }
    out.push_back({q, loss});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const QidScore& a, const QidScore& b) { return a.rilm_loss < b.rilm_loss; });
  return out;
}

std::vector<QidScore> apply_dynamic_breakout(std::vector<QidScore> ranked,
                                             const BreakoutConfig& breakout) {
  if (!breakout.enabled) return ranked;
  std::erase_if(ranked, [&](const QidScore& s) { return s.rilm_loss > breakout.threshold; });
  return ranked;
}

std::vector<ProposedCut> propose_numeric_cuts(const FunnelContext& ctx,
                                              const Partition& partition, std::size_t qid) {
  const QidSpace& qids = *ctx.qids;
  if (qids[qid].kind != ColumnKind::kNumeric) {
    throw ArgumentError("QID '" + qids[qid].name + "' is not numeric");
  }
  std::vector<ProposedCut> out;
  if (!partition.present(qid) || partition.stats(qid).numeric.distinct < 2) return out;

  const Column& col = ctx.dataset->column(qids[qid].column);
  std::vector<double> values;
  values.reserve(partition.size());
  for (RecordId r : partition.ids()) values.push_back(col.number(r));
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const auto k = static_cast<std::size_t>(ctx.k);
  auto left_count = [&](double t) {
    return static_cast<std::size_t>(std::upper_bound(values.begin(), values.end(), t) -
                                    values.begin());
  };
  auto admissible = [&](std::size_t left) { return left >= k && n - left >= k; };

  if (ctx.numeric.mode == NumericCutMode::kMedian) {
    const double m = values[(n - 1) / 2];
    if (admissible(left_count(m))) {
      ProposedCut cut;
      cut.qid = qid;
      cut.kind = CutKind::kMedian;
      cut.threshold = m;
      out.push_back(std::move(cut));
    }
    return out;
  }

  if (ctx.numeric.bins < 2) throw ArgumentError("bin-edge mode needs at least 2 bins");
  const double lo = values.front();
  const double hi = values.back();
  std::size_t previous_left = 0;
  for (int i = 1; i < ctx.numeric.bins; ++i) {
    const double edge = lo + i * (hi - lo) / ctx.numeric.bins;
    const std::size_t left = left_count(edge);
    if (left == 0 || left == n || left == previous_left) continue;
    previous_left = left;
    if (!admissible(left)) continue;
    ProposedCut cut;
    cut.qid = qid;
    cut.kind = CutKind::kBinEdge;
    cut.threshold = edge;
    out.push_back(std::move(cut));
  }
  return out;
}

std::vector<ProposedCut> propose_categorical_cut(const FunnelContext& ctx,
                                                 const Partition& partition, std::size_t qid) {
  const QidSpace& qids = *ctx.qids;
  const QidInfo& info = qids[qid];
  if (info.kind != ColumnKind::kCategorical) {
    throw ArgumentError("QID '" + info.name + "' is not categorical");
  }
  std::vector<ProposedCut> out;
  if (!partition.present(qid)) return out;
  const QidStats& st = partition.stats(qid);
  const NodeIndex lca = observed_lca(info, st);
  const GTree& tree = *info.gtree;
  if (tree.is_leaf(lca)) return out;

  ProposedCut cut;
  cut.qid = qid;
  cut.kind = CutKind::kGtreeChildren;
  cut.lca = lca;
  cut.arity = static_cast<int>(tree.node(lca).children.size());
  cut.child_of_code.assign(info.leaf_of_code.size(), -1);
  std::vector<bool> used(cut.arity, false);
  for (auto code : st.codes) {
    const int slot = tree.child_slot(tree.child_toward(lca, info.leaf_of_code[code]));
    cut.child_of_code[code] = slot;
    used[slot] = true;
  }
  if (std::count(used.begin(), used.end(), true) < 2) return out;
  out.push_back(std::move(cut));
  return out;
}

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stddev() const { return n ? std::sqrt(m2 / static_cast<double>(n)) : 0.0; }
};

}  // namespace

ScoredCut score_cut(const FunnelContext& ctx, const Partition& partition,
                    const ProposedCut& cut) {
  const QidSpace& qids = *ctx.qids;
  const Dataset& ds = *ctx.dataset;
  std::vector<std::size_t> numeric;
  for (std::size_t q = 0; q < qids.size(); ++q) {
    if (qids[q].kind == ColumnKind::kNumeric && partition.present(q)) numeric.push_back(q);
  }
  const auto arity = static_cast<std::size_t>(cut.arity);
  std::vector<Moments> moments(arity * numeric.size());
  ScoredCut scored;
  scored.cut = cut;
  scored.child_sizes.assign(arity, 0);
  for (RecordId r : partition.ids()) {
    const auto child = static_cast<std::size_t>(cut.child_of(ds, qids, r));
    ++scored.child_sizes[child];
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      moments[child * numeric.size() + j].add(ds.column(qids[numeric[j]].column).number(r));
    }
  }

  double total = 0;
  const auto parent_n = static_cast<double>(partition.size());
  for (std::size_t j = 0; j < numeric.size(); ++j) {
    const double sigma_p = partition.stats(numeric[j]).numeric.stddev;
    if (sigma_p <= 0) continue;
    double sigma_c = 0;
    for (std::size_t c = 0; c < arity; ++c) {
      const Moments& m = moments[c * numeric.size() + j];
      if (m.n) sigma_c += (static_cast<double>(m.n) / parent_n) * m.stddev();
    }
    total += (sigma_c - sigma_p) / sigma_p;
  }
  scored.score =
      numeric.empty() ? 0.0 : std::clamp(total / static_cast<double>(numeric.size()), -1.0, 1.0);

  for (std::size_t size : scored.child_sizes) {
    if (size > 0 && size < static_cast<std::size_t>(ctx.k)) scored.implied_suppression += size;
  }
  return scored;
}

bool final_cut_before(const ScoredCut& a, const ScoredCut& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.cut.qid != b.cut.qid) return a.cut.qid < b.cut.qid;
  if (a.cut.threshold != b.cut.threshold) return a.cut.threshold < b.cut.threshold;
  return a.cut.kind < b.cut.kind;
}

std::vector<ScoredCut> rank_final_candidates(std::span<const ScoredCut> candidates,
                                             std::size_t budget_remaining) {
  std::vector<ScoredCut> out;
  for (const auto& c : candidates) {
    if (c.implied_suppression <= budget_remaining) out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), final_cut_before);
  return out;
}

std::optional<ScoredCut> select_final_cut(std::span<const ScoredCut> candidates,
                                          std::size_t budget_remaining) {
  const ScoredCut* best = nullptr;
  for (const auto& c : candidates) {
    if (c.implied_suppression > budget_remaining) continue;
    if (!best || final_cut_before(c, *best)) best = &c;
  }
  if (!best) return std::nullopt;
  return *best;
}

bool DecisionCounts::monotone() const {
  const auto& choices = (*this)[FunnelStage::kChoices];
  const auto& kept = (*this)[FunnelStage::kAfterBreakout];
  const auto& proposed = (*this)[FunnelStage::kProposed];
  const auto& scored = (*this)[FunnelStage::kScored];
  const auto& accepted = (*this)[FunnelStage::kAccepted];
  auto le = [](const StageCounts& a, const StageCounts& b) {
    return a.numeric <= b.numeric && a.categorical <= b.categorical;
  };
  return le(kept, choices) && le(scored, proposed) && le(accepted, scored) &&
         accepted.total() <= 1;
}

void FunnelStats::record(const DecisionCounts& d) {
  ++decisions;
  for (std::size_t s = 0; s < kFunnelStageCount; ++s) {
    totals.stage[s].numeric += d.stage[s].numeric;
    totals.stage[s].categorical += d.stage[s].categorical;
  }
  if (!d.monotone()) ++monotonicity_violations;
  if (tracing) trace.push_back(d);
}

void FunnelStats::merge(const FunnelStats& other) {
  decisions += other.decisions;
  for (std::size_t s = 0; s < kFunnelStageCount; ++s) {
    totals.stage[s].numeric += other.totals.stage[s].numeric;
    totals.stage[s].categorical += other.totals.stage[s].categorical;
  }
  monotonicity_violations += other.monotonicity_violations;
  if (tracing) trace.insert(trace.end(), other.trace.begin(), other.trace.end());
}

void write_funnel_csv(std::ostream& out, const FunnelStats& stats) {
  out << "stage,kind,count\n";
  for (std::size_t s = 0; s < kFunnelStageCount; ++s) {
    const auto name = to_string(static_cast<FunnelStage>(s));
    out << name << ",categorical," << stats.totals.stage[s].categorical << '\n';
    out << name << ",numeric," << stats.totals.stage[s].numeric << '\n';
  }
}

void write_funnel_trace_csv(std::ostream& out, const FunnelStats& stats) {
  out << "decision";
  for (std::size_t s = 0; s < kFunnelStageCount; ++s) {
    const auto name = to_string(static_cast<FunnelStage>(s));
    out << ',' << name << "_categorical," << name << "_numeric";
  }
  out << '\n';
  for (std::size_t i = 0; i < stats.trace.size(); ++i) {
    out << i;
    for (const auto& c : stats.trace[i].stage) out << ',' << c.categorical << ',' << c.numeric;
    out << '\n';
  }
}

}  // namespace kanon
