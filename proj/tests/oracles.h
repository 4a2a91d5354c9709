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

// Reference implementations used by the unit and acceptance tests.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include "kanon/dataset.h"

namespace kanon::oracle {

using Classes = std::set<std::vector<RecordId>>;
using Table = std::vector<std::vector<double>>;  // row-major

// Plain recursive form of the median-split recursion over a row-major table.
inline void median_split(const Table& rows, const std::vector<RecordId>& part,
                         const std::vector<double>& domain, std::size_t k, Classes& out) {
  const std::size_t dims = domain.size();
  std::vector<std::size_t> dims_by_range(dims);
  std::vector<double> norm(dims);
  for (std::size_t q = 0; q < dims; ++q) {
    dims_by_range[q] = q;
    double lo = rows[part[0]][q], hi = lo;
    for (RecordId r : part) {
      lo = std::min(lo, rows[r][q]);
      hi = std::max(hi, rows[r][q]);
    }
    norm[q] = domain[q] == 0 ? 0 : (hi - lo) / domain[q];
  }
  std::sort(dims_by_range.begin(), dims_by_range.end(), [&](std::size_t a, std::size_t b) {
    return norm[a] != norm[b] ? norm[a] > norm[b] : a < b;
  });
  for (std::size_t q : dims_by_range) {
    std::vector<double> v;
    for (RecordId r : part) v.push_back(rows[r][q]);
    std::nth_element(v.begin(), v.begin() + static_cast<long>((v.size() - 1) / 2), v.end());
    const double m = v[(v.size() - 1) / 2];
    std::vector<RecordId> lhs, rhs;
    for (RecordId r : part) (rows[r][q] <= m ? lhs : rhs).push_back(r);
    if (lhs.size() >= k && rhs.size() >= k) {
      median_split(rows, lhs, domain, k, out);
      median_split(rows, rhs, domain, k, out);
      return;
    }
  }
  out.insert(part);
}

inline Classes mondrian_classes(const Table& rows, std::size_t k) {
  Classes out;
  if (rows.empty()) return out;
  std::vector<double> domain(rows[0].size());
  for (std::size_t q = 0; q < domain.size(); ++q) {
    double lo = rows[0][q], hi = lo;
    for (const auto& r : rows) {
      lo = std::min(lo, r[q]);
      hi = std::max(hi, r[q]);
    }
    domain[q] = hi - lo;
  }
  std::vector<RecordId> all(rows.size());
  for (RecordId r = 0; r < all.size(); ++r) all[r] = r;
  median_split(rows, all, domain, k, out);
  return out;
}

// Windows model: each checkpoint opens a window that accumulates its own
// charges. Rollback discards the top window, commit folds it into the one
// below.
class WindowInterpreter {
 public:
  void checkpoint() { windows_.push_back(0); }
  void charge(std::size_t c) { windows_.back() += c; }
  void rollback() { windows_.pop_back(); }
  void commit() {
    const std::size_t top = windows_.back();
    windows_.pop_back();
    windows_.back() += top;
  }
  std::size_t open() const { return windows_.size() - 1; }
  std::size_t charged() const {
    return std::accumulate(windows_.begin(), windows_.end(), std::size_t{0});
  }

 private:
  std::vector<std::size_t> windows_{0};
};

}  // namespace kanon::oracle
