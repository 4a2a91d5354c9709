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

#include "kanon/baseline.h"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "kanon/errors.h"
#include "kanon/strategy.h"

namespace kanon {

std::vector<std::vector<RecordId>> original_mondrian(const Dataset& dataset,
                                                     const QidSpace& qids, int k) {
  if (k < 1) throw ArgumentError("k must be positive");
  std::vector<const Column*> cols;
  std::vector<double> domain_width;
  for (const auto& q : qids.qids()) {
    if (q.kind != ColumnKind::kNumeric) {
      throw SchemaError("baseline supports numeric QIDs only; '" + q.name + "' is categorical");
    }
    const Column& col = dataset.column(q.column);
    for (RecordId r = 0; r < dataset.size(); ++r) {
      if (col.is_missing(r)) {
        throw ArgumentError("baseline input has a missing '" + q.name + "' value in row " +
                            std::to_string(r + 1));
      }
    }
    cols.push_back(&col);
    domain_width.push_back(q.domain.width());
  }

  const auto kk = static_cast<std::size_t>(k);
  std::vector<std::vector<RecordId>> classes;
  std::vector<std::vector<RecordId>> stack;
  std::vector<RecordId> all(dataset.size());
  for (RecordId r = 0; r < all.size(); ++r) all[r] = r;
  if (!all.empty()) stack.push_back(std::move(all));

  std::vector<double> values;
  while (!stack.empty()) {
    std::vector<RecordId> part = std::move(stack.back());
    stack.pop_back();

    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t q = 0; q < cols.size(); ++q) {
      double lo = cols[q]->number(part[0]);
      double hi = lo;
      for (RecordId r : part) {
        lo = std::min(lo, cols[q]->number(r));
        hi = std::max(hi, cols[q]->number(r));
      }
      order.emplace_back(domain_width[q] > 0 ? (hi - lo) / domain_width[q] : 0.0, q);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    bool cut = false;
    for (const auto& [range, q] : order) {
      values.clear();
      for (RecordId r : part) values.push_back(cols[q]->number(r));
      std::sort(values.begin(), values.end());
      const double median = values[(values.size() - 1) / 2];
      const auto left_n = static_cast<std::size_t>(
          std::upper_bound(values.begin(), values.end(), median) - values.begin());
      if (left_n < kk || part.size() - left_n < kk) continue;
      std::vector<RecordId> left;
      std::vector<RecordId> right;
      for (RecordId r : part) (cols[q]->number(r) <= median ? left : right).push_back(r);
      stack.push_back(std::move(right));
      stack.push_back(std::move(left));
      cut = true;
      break;
    }
    if (!cut) classes.push_back(std::move(part));
  }
  for (auto& c : classes) std::sort(c.begin(), c.end());
  return classes;
}

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += '+';
    out += names[i];
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<ComparisonRow> compare_runs(const Dataset& dataset,
                                        const std::vector<std::vector<std::string>>& qid_sets,
                                        const std::vector<int>& ks, const EngineConfig& engine) {
  std::vector<ComparisonRow> rows;
  for (const auto& set : qid_sets) {
    const Dataset ds = with_qids(dataset, set);
    const QidSpace qids = QidSpace::build(ds);
    for (const auto& q : qids.qids()) {
      if (q.kind != ColumnKind::kNumeric) {
        throw SchemaError("baseline comparison needs numeric QIDs; '" + q.name +
                          "' is categorical");
      }
    }
    for (int k : ks) {
      ComparisonRow row{join(set), set.size(), k, {}, {}};

      auto t0 = std::chrono::steady_clock::now();
      KAnonymityStrategy strategy(ds, qids, k, engine.numeric);
      auto core = anonymize(ds, qids, strategy, engine);
      row.core = summarize(core.output, qids, seconds_since(t0));

      t0 = std::chrono::steady_clock::now();
      auto classes = original_mondrian(ds, qids, k);
      const double elapsed = seconds_since(t0);
      row.baseline = summarize(output_from_classes(ds, qids, classes), qids, elapsed);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "qid_set,dims,k,core_dm,core_rilm,core_suppressed,core_runtime_s,baseline_dm,"
         "baseline_rilm,baseline_runtime_s\n";
  for (const auto& r : rows) {
    out << r.qid_set << ',' << r.dims << ',' << r.k << ',' << r.core.dm << ','
        << format_number(r.core.rilm) << ',' << r.core.suppressed << ','
        << format_number(r.core.runtime_seconds) << ',' << r.baseline.dm << ','
        << format_number(r.baseline.rilm) << ',' << format_number(r.baseline.runtime_seconds)
        << '\n';
  }
}

}  // namespace kanon
