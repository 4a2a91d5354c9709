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
#include <span>
#include <string>

#include <json.hpp>

#include "kanon/engine.h"
#include "kanon/qid_space.h"

namespace kanon {

// Sum of squared class sizes plus n per suppressed record. Throws
// ArgumentError unless the sizes and suppressed count add up to n.
std::uint64_t discernibility(std::span<const std::size_t> class_sizes, std::size_t suppressed,
                             std::size_t n);

// 1 - mean per-cell loss. Numeric cells lose width / full column width;
// categorical cells (leaves under node - 1) / (leaves under root - 1).
// Suppressed records lose 1 on every QID; cells missing by pattern in
// retained records are left out. LookupError for unresolvable values.
double rilm(const AnonymizedOutput& output, const QidSpace& qids);

struct MetricsReport {
  std::size_t n_records = 0;
  std::uint64_t dm = 0;
  double rilm = 1.0;
  std::size_t suppressed = 0;
  double suppression_rate = 0;
  std::size_t class_count = 0;
  std::size_t min_class_size = 0;
  double mean_class_size = 0;
  std::size_t max_class_size = 0;
  std::size_t s_max = 0;
  std::size_t forced_suppressed = 0;
  bool budget_warning = false;
  double runtime_seconds = 0;
};

MetricsReport summarize(const AnonymizedOutput& output, const QidSpace& qids,
                        double runtime_seconds);

// Deterministic fields only; runtime is reported separately.
nlohmann::ordered_json metrics_json(const MetricsReport& report);

// Benchmark row: n,dm,rilm,suppressed,suppression_rate,classes,min,mean,max,runtime_s.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);

}  // namespace kanon
