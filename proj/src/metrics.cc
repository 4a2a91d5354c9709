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

#include "kanon/metrics.h"

#include <algorithm>
#include <sstream>

#include "kanon/errors.h"

namespace kanon {

std::uint64_t discernibility(std::span<const std::size_t> class_sizes, std::size_t suppressed,
                             std::size_t n) {
  std::uint64_t total = suppressed;
  std::uint64_t dm = static_cast<std::uint64_t>(suppressed) * n;
  for (std::size_t s : class_sizes) {
    total += s;
    dm += static_cast<std::uint64_t>(s) * s;
  }
  if (total != n) {
    throw ArgumentError("class sizes and suppressed records sum to " + std::to_string(total) +
                        ", expected " + std::to_string(n));
  }
  return dm;
}

namespace {

double cell_loss(const QidInfo& info, const GeneralizedValue& value) {
  if (const auto* iv = std::get_if<Interval>(&value)) {
    if (info.kind != ColumnKind::kNumeric) {
      throw LookupError("interval value for categorical QID '" + info.name + "'");
    }
    if (!info.domain.contains(*iv)) {
      throw LookupError("interval " + render_interval(*iv) + " outside the domain of '" +
                        info.name + "'");
    }
    const double w = info.domain.width();
    return w > 0 ? iv->width() / w : 0.0;
  }
  if (const auto* node = std::get_if<CategoryNode>(&value)) {
    if (!info.gtree || node->node < 0 ||
        static_cast<std::size_t>(node->node) >= info.gtree->size()) {
      throw LookupError("unknown gtree node for QID '" + info.name + "'");
    }
    return categorical_loss(*info.gtree, node->node);
  }
  return 1.0;  // Suppressed
}

}  // namespace

double rilm(const AnonymizedOutput& output, const QidSpace& qids) {
  const std::size_t m = qids.size();
  double loss = static_cast<double>(output.suppressed.size() * m);
  std::size_t cells = output.suppressed.size() * m;
  for (const auto& cls : output.classes) {
    double class_loss = 0;
    std::size_t class_cells = 0;
    for (std::size_t q = 0; q < m; ++q) {
      if (std::holds_alternative<MissingValue>(cls.values[q])) continue;
      class_loss += cell_loss(qids[q], cls.values[q]);
      ++class_cells;
    }
    loss += class_loss * static_cast<double>(cls.size);
    cells += class_cells * cls.size;
  }
  if (cells == 0) return 1.0;
  return std::clamp(1.0 - loss / static_cast<double>(cells), 0.0, 1.0);
}

MetricsReport summarize(const AnonymizedOutput& output, const QidSpace& qids,
                        double runtime_seconds) {
  MetricsReport r;
  r.n_records = output.n_records;
  std::vector<std::size_t> sizes;
  for (const auto& c : output.classes) sizes.push_back(c.size);
  r.suppressed = output.suppressed.size();
  r.dm = discernibility(sizes, r.suppressed, r.n_records);
  r.rilm = rilm(output, qids);
  r.suppression_rate =
      r.n_records ? static_cast<double>(r.suppressed) / static_cast<double>(r.n_records) : 0.0;
  r.class_count = sizes.size();
  if (!sizes.empty()) {
    r.min_class_size = *std::min_element(sizes.begin(), sizes.end());
    r.max_class_size = *std::max_element(sizes.begin(), sizes.end());
    std::size_t retained = 0;
    for (auto s : sizes) retained += s;
    r.mean_class_size = static_cast<double>(retained) / static_cast<double>(sizes.size());
  }
  r.s_max = output.budget.s_max;
  r.forced_suppressed = output.budget.forced_suppressed;
  r.budget_warning = output.budget.warning;
  r.runtime_seconds = runtime_seconds;
  return r;
}

nlohmann::ordered_json metrics_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["n_records"] = r.n_records;
  j["dm"] = r.dm;
  j["rilm"] = r.rilm;
  j["rilm_definition"] = "RILM (artifact definition): 1 - mean per-cell loss";
  j["suppressed"] = r.suppressed;
  j["suppression_rate"] = r.suppression_rate;
  j["class_count"] = r.class_count;
  j["min_class_size"] = r.min_class_size;
  j["mean_class_size"] = r.mean_class_size;
  j["max_class_size"] = r.max_class_size;
  j["suppression_budget"] = r.s_max;
  j["forced_suppressed"] = r.forced_suppressed;
  j["budget_warning"] = r.budget_warning;
  return j;
}

std::string metrics_csv_header() {
  return "n,dm,rilm,suppressed,suppression_rate,classes,min_class,mean_class,max_class,"
         "runtime_s";
}

std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream out;
  out << r.n_records << ',' << r.dm << ',' << format_number(r.rilm) << ',' << r.suppressed << ','
      << format_number(r.suppression_rate) << ',' << r.class_count << ',' << r.min_class_size
      << ',' << format_number(r.mean_class_size) << ',' << r.max_class_size << ','
      << format_number(r.runtime_seconds);
  return out.str();
}

}  // namespace kanon
