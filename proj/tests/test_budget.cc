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

#include <gtest/gtest.h>

#include <random>

#include "kanon/budget.h"
#include "kanon/errors.h"
#include "oracles.h"

namespace kanon {
namespace {

using oracle::WindowInterpreter;

TEST(GlobalBudget, Examples) {
  EXPECT_EQ(global_budget(48842, 0.98, 1.0), 976u);
  EXPECT_EQ(global_budget(1000, 1.0, 1.0), 0u);
  EXPECT_EQ(global_budget(100, 0.95, 2.0), 10u);
  EXPECT_EQ(global_budget(48842, 0.99, 1.0), 488u);
}

TEST(GlobalBudget, RejectsOutOfRange) {
  EXPECT_THROW(global_budget(10, 1.5, 1.0), ArgumentError);
  EXPECT_THROW(global_budget(10, -0.1, 1.0), ArgumentError);
  EXPECT_THROW(global_budget(10, 0.9, -1.0), ArgumentError);
}

TEST(AllocateProportional, Examples) {
  EXPECT_EQ(allocate_proportional(100, 1000, std::vector<std::size_t>{250}),
            (std::vector<std::size_t>{25}));
  EXPECT_EQ(allocate_proportional(37, 1000, std::vector<std::size_t>{1000}),
            (std::vector<std::size_t>{37}));
  EXPECT_EQ(allocate_proportional(10, 100, std::vector<std::size_t>{33, 33, 34}),
            (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_THROW(allocate_proportional(10, 5, std::vector<std::size_t>{3, 3}), ArgumentError);
}

TEST(AllocateProportional, NeverOverAllocates) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::size_t> sizes(1 + rng() % 8);
    for (auto& s : sizes) s = rng() % 5000;
    const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    const std::size_t n = total + rng() % 100 + 1;
    const std::size_t s_max = rng() % (n + 1);
    const auto alloc = allocate_proportional(s_max, n, sizes);
    EXPECT_LE(std::accumulate(alloc.begin(), alloc.end(), std::size_t{0}), s_max);
    for (std::size_t i = 0; i < sizes.size(); ++i) EXPECT_EQ(alloc[i], sizes[i] * s_max / n);
  }
}

TEST(SuppressionBudget, OverdrawSignalsBacktrack) {
  SuppressionBudget b(10);
  b.charge(4);
  b.charge(7);
  EXPECT_EQ(b.remaining(), -1);
  EXPECT_TRUE(b.overdrawn());
}

TEST(SuppressionBudget, RollbackRestores) {
  SuppressionBudget b(10);
  b.charge(2);
  b.checkpoint();
  b.charge(5);
  b.rollback();
  EXPECT_EQ(b.charged(), 2u);
  b.charge(0);
  EXPECT_EQ(b.charged(), 2u);
  EXPECT_THROW(b.rollback(), ContractViolation);
  EXPECT_THROW(b.commit(), ContractViolation);
}

TEST(SuppressionBudget, RandomSequencesMatchInterpreter) {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 2000; ++trial) {
    SuppressionBudget b(rng() % 50);
    WindowInterpreter ref;
    const int ops = static_cast<int>(rng() % 60);
    for (int i = 0; i < ops; ++i) {
      switch (rng() % 4) {
        case 0:
          b.checkpoint();
          ref.checkpoint();
          break;
        case 1: {
          const std::size_t c = rng() % 10;
          b.charge(c);
          ref.charge(c);
          break;
        }
        case 2:
          if (ref.open()) {
            b.rollback();
            ref.rollback();
          } else {
            EXPECT_THROW(b.rollback(), ContractViolation);
          }
          break;
        default:
          if (ref.open()) {
            b.commit();
            ref.commit();
          }
          break;
      }
      ASSERT_EQ(b.checkpoint_depth(), ref.open());
    }
    ASSERT_EQ(b.charged(), ref.charged()) << "trial " << trial;
  }
}

}  // namespace
}  // namespace kanon
