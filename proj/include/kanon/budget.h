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
#include <span>
#include <vector>

namespace kanon {

// floor(n * (1 - p_min) * multiplier). Throws ArgumentError if p_min is
// outside [0, 1] or multiplier is negative.
std::size_t global_budget(std::size_t n, double p_min, double multiplier);

// floor(size_i * s_max / n) for each partition. Never over-allocates.
std::vector<std::size_t> allocate_proportional(std::size_t s_max, std::size_t n,
                                               std::span<const std::size_t> sizes);

// Suppression allowance of one task. Charges accumulate; checkpoints let a
// caller undo every charge made since the matching checkpoint.
class SuppressionBudget {
 public:
  explicit SuppressionBudget(std::size_t s_max = 0) : s_max_(s_max) {}

  std::size_t s_max() const { return s_max_; }
  std::size_t charged() const { return charged_; }
  // May be negative inside a backtracking window.
  std::int64_t remaining() const {
    return static_cast<std::int64_t>(s_max_) - static_cast<std::int64_t>(charged_);
  }
  bool overdrawn() const { return remaining() < 0; }

  void charge(std::size_t count) { charged_ += count; }
  void checkpoint() { checkpoints_.push_back(charged_); }
  // Restores the most recent checkpoint and pops it. ContractViolation when
  // there is none.
  void rollback();
  // Pops the most recent checkpoint, keeping the charges.
  void commit();
  std::size_t checkpoint_depth() const { return checkpoints_.size(); }

 private:
  std::size_t s_max_ = 0;
  std::size_t charged_ = 0;
  std::vector<std::size_t> checkpoints_;
};

}  // namespace kanon
