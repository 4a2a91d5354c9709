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

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace kanon {

using NodeIndex = std::int32_t;

// Categorical generalization tree. Leaves are category values; internal nodes
// are coarser labels. Immutable after construction.
class GTree {
 public:
  struct Node {
    std::string label;
    NodeIndex parent = -1;
    std::vector<NodeIndex> children;
    int depth = 0;
    int leaf_count = 0;
  };

  // Root "*" with one leaf per distinct value, leaves in lexicographic order.
  static GTree flat(std::span<const std::string> values);

  // Builds from (parent, child) edges. The root is the unique label that never
  // appears as a child. Throws StructureError on multiple roots, a child with
  // more than one parent, cycles, or nodes unreachable from the root.
  static GTree from_edges(std::span<const std::pair<std::string, std::string>> edges);

  NodeIndex root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeIndex i) const;
  const std::string& label(NodeIndex i) const { return node(i).label; }
  bool is_leaf(NodeIndex i) const { return node(i).children.empty(); }
  int leaf_count(NodeIndex i) const { return node(i).leaf_count; }
  int height() const;

  // Leaf lookup by label; throws LookupError for unknown or internal labels.
  NodeIndex leaf(std::string_view label) const;
  bool has_leaf(std::string_view label) const;
  std::vector<std::string> leaf_labels() const;

  NodeIndex lca(NodeIndex a, NodeIndex b) const;
  NodeIndex lca(std::span<const NodeIndex> nodes) const;
  NodeIndex lca(std::span<const std::string> leaf_labels) const;

  // Immediate child of `ancestor` on the path down to `descendant`.
  NodeIndex child_toward(NodeIndex ancestor, NodeIndex descendant) const;

  // Slot of `child` within its parent's children list.
  int child_slot(NodeIndex child) const;

 private:
  std::vector<Node> nodes_;
  std::map<std::string, NodeIndex, std::less<>> leaves_;

  void finish();
};

GTree build_flat_gtree(std::span<const std::string> values);

// Parses a `parent,child` edge list. A first line reading exactly
// "parent,child" is treated as a header. Blank lines and lines starting with
// '#' are skipped.
GTree load_gtree(const std::filesystem::path& path);
GTree parse_gtree(std::string_view text);

struct Interval {
  double lo = 0;
  double hi = 0;

  double width() const { return hi - lo; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

struct PercentilePair {
  double low = 0;
  double high = 100;
  bool operator==(const PercentilePair&) const = default;
};

// (0,100), (1,99), (5,95), (10,90), (25,75).
std::vector<PercentilePair> default_percentile_pairs();

// Linear interpolation between order statistics of `sorted` (ascending):
// position p/100 * (n - 1).
double percentile(std::span<const double> sorted, double pct);

// Nested numeric domains, outermost first. The outermost level is the full
// column range; inner levels come from percentile pairs.
class DomainLadder {
 public:
  // Missing (NaN) cells are ignored. Throws DomainError if no value is
  // present, ArgumentError if pairs are out of range or not nested
  // outermost-to-innermost. Consecutive identical levels are collapsed.
  static DomainLadder build(std::span<const double> column,
                            std::span<const PercentilePair> pairs);

  const std::vector<Interval>& levels() const { return levels_; }
  const Interval& outermost() const { return levels_.front(); }

  // Innermost level that contains `range`. Throws DomainError when `range`
  // is not inside the outermost level.
  const Interval& smallest_enclosing(const Interval& range) const;

 private:
  std::vector<Interval> levels_;
};

struct CategoryNode {
  NodeIndex node = 0;
  bool operator==(const CategoryNode&) const = default;
};
struct Suppressed {
  bool operator==(const Suppressed&) const = default;
};
// QID absent under the partition's missing-value pattern.
struct MissingValue {
  bool operator==(const MissingValue&) const = default;
};

using GeneralizedValue = std::variant<Interval, CategoryNode, Suppressed, MissingValue>;

// "20-60" for a proper interval, "40" for a degenerate one.
std::string render_interval(const Interval& interval);

}  // namespace kanon
