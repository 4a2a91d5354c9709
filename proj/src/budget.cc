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

#include "kanon/budget.h"

#include <cmath>
#include <numeric>

#include "kanon/errors.h"

namespace kanon {

std::size_t global_budget(std::size_t n, double p_min, double multiplier) {
  if (!(p_min >= 0.0 && p_min <= 1.0)) throw ArgumentError("p_min must lie in [0, 1]");
  if (!(multiplier >= 0.0) || !std::isfinite(multiplier)) {
    throw ArgumentError("multiplier must be a finite non-negative number");
  }
  // The epsilon absorbs representation error such as 100 * (1 - 0.95) * 2.
  const double raw = static_cast<double>(n) * (1.0 - p_min) * multiplier;
  return static_cast<std::size_t>(std::floor(raw + 1e-9));
}

std::vector<std::size_t> allocate_proportional(std::size_t s_max, std::size_t n,
                                               std::span<const std::size_t> sizes) {
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total > n) throw ArgumentError("partition sizes exceed the record count");
  std::vector<std::size_t> out;
  out.reserve(sizes.size());
  for (std::size_t s : sizes) {
    out.push_back(n == 0 ? 0
                         : static_cast<std::size_t>(static_cast<unsigned __int128>(s) * s_max / n));
  }
  return out;
}

void SuppressionBudget::rollback() {
  if (checkpoints_.empty()) throw ContractViolation("rollback without a checkpoint");
  charged_ = checkpoints_.back();
  checkpoints_.pop_back();
}

void SuppressionBudget::commit() {
  if (checkpoints_.empty()) throw ContractViolation("commit without a checkpoint");
  checkpoints_.pop_back();
}

}  // namespace kanon
