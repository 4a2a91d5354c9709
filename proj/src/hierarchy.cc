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

#include "kanon/hierarchy.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "kanon/dataset.h"
#include "kanon/errors.h"

namespace kanon {

const GTree::Node& GTree::node(NodeIndex i) const {
  if (i < 0 || static_cast<std::size_t>(i) >= nodes_.size()) {
    throw LookupError("gtree node " + std::to_string(i) + " does not exist");
  }
  return nodes_[i];
}

GTree GTree::flat(std::span<const std::string> values) {
  std::vector<std::string> leaves(values.begin(), values.end());
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  if (leaves.empty()) throw ArgumentError("cannot build a gtree from an empty value set");
  GTree t;
  t.nodes_.push_back({"*", -1, {}, 0, 0});
  for (auto& v : leaves) {
    const auto idx = static_cast<NodeIndex>(t.nodes_.size());
    t.nodes_.push_back({std::move(v), 0, {}, 1, 0});
    t.nodes_[0].children.push_back(idx);
  }
  t.finish();
  return t;
}

GTree GTree::from_edges(std::span<const std::pair<std::string, std::string>> edges) {
  if (edges.empty()) throw StructureError("gtree has no edges");
  std::map<std::string, std::size_t, std::less<>> ids;
  std::vector<std::string> labels;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, labels.size());
    if (inserted) labels.push_back(label);
    return it->second;
  };
  std::vector<std::vector<std::size_t>> children;
  std::map<std::size_t, std::size_t> parent_of;
  for (const auto& [parent, child] : edges) {
    if (parent == child) throw StructureError("gtree edge '" + parent + "' points to itself");
    const auto p = id_of(parent);
    const auto c = id_of(child);
    children.resize(labels.size());
    if (!parent_of.emplace(c, p).second) {
      throw StructureError("gtree label '" + child + "' has more than one parent");
    }
    children[p].push_back(c);
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!parent_of.count(i)) roots.push_back(i);
  }
  if (roots.empty()) throw StructureError("gtree has no root (cycle)");
  if (roots.size() > 1) {
    throw StructureError("gtree has multiple roots: '" + labels[roots[0]] + "' and '" +
                         labels[roots[1]] + "'");
  }

  GTree t;
  std::vector<NodeIndex> remap(labels.size(), -1);
  std::deque<std::size_t> queue{roots.front()};
  remap[roots.front()] = 0;
  t.nodes_.push_back({labels[roots.front()], -1, {}, 0, 0});
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    for (auto c : children[cur]) {
      const auto idx = static_cast<NodeIndex>(t.nodes_.size());
      remap[c] = idx;
      t.nodes_.push_back({labels[c], remap[cur], {}, t.nodes_[remap[cur]].depth + 1, 0});
      t.nodes_[remap[cur]].children.push_back(idx);
      queue.push_back(c);
    }
  }
  if (t.nodes_.size() != labels.size()) {
    throw StructureError("gtree contains a cycle unreachable from root '" +
                         labels[roots.front()] + "'");
  }
  t.finish();
  return t;
}

void GTree::finish() {
  // Children always have larger indices than their parent.
  for (auto i = static_cast<NodeIndex>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.children.empty()) {
      n.leaf_count = 1;
      leaves_.emplace(n.label, i);
    }
    if (n.parent >= 0) nodes_[n.parent].leaf_count += n.leaf_count;
  }
}

int GTree::height() const {
  int h = 0;
  for (const auto& n : nodes_) h = std::max(h, n.depth);
  return h;
}

NodeIndex GTree::leaf(std::string_view label) const {
  auto it = leaves_.find(label);
  if (it == leaves_.end()) {
    throw LookupError("'" + std::string(label) + "' is not a leaf of the gtree");
  }
  return it->second;
}

bool GTree::has_leaf(std::string_view label) const { return leaves_.count(label) > 0; }

std::vector<std::string> GTree::leaf_labels() const {
  std::vector<std::string> out;
  for (const auto& [label, idx] : leaves_) out.push_back(label);
  return out;
}

NodeIndex GTree::lca(NodeIndex a, NodeIndex b) const {
  while (node(a).depth > node(b).depth) a = nodes_[a].parent;
  while (node(b).depth > node(a).depth) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

NodeIndex GTree::lca(std::span<const NodeIndex> nodes) const {
  if (nodes.empty()) throw ArgumentError("lca of an empty node set");
  NodeIndex acc = nodes.front();
  for (auto n : nodes.subspan(1)) {
    if (acc == root()) break;
    acc = lca(acc, n);
  }
  return acc;
}

NodeIndex GTree::lca(std::span<const std::string> leaf_labels) const {
  std::vector<NodeIndex> nodes;
  nodes.reserve(leaf_labels.size());
  for (const auto& l : leaf_labels) nodes.push_back(leaf(l));
  return lca(nodes);
}

NodeIndex GTree::child_toward(NodeIndex ancestor, NodeIndex descendant) const {
  const int target = node(ancestor).depth + 1;
  NodeIndex cur = descendant;
  while (node(cur).depth > target) cur = nodes_[cur].parent;
  if (node(cur).depth != target || nodes_[cur].parent != ancestor) {
    throw ArgumentError("node '" + label(descendant) + "' is not below '" + label(ancestor) + "'");
  }
  return cur;
}

int GTree::child_slot(NodeIndex child) const {
  const auto& siblings = node(node(child).parent).children;
  return static_cast<int>(std::find(siblings.begin(), siblings.end(), child) - siblings.begin());
}

GTree build_flat_gtree(std::span<const std::string> values) { return GTree::flat(values); }

GTree parse_gtree(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cells = split_csv_line(line);
    const bool blank = cells.size() == 1 && cells[0].empty();
    if (blank || (!cells.empty() && !cells[0].empty() && cells[0][0] == '#')) continue;
    if (first && cells.size() == 2 && cells[0] == "parent" && cells[1] == "child") {
      first = false;
      continue;
    }
    first = false;
    if (cells.size() != 2 || cells[0].empty() || cells[1].empty()) {
      throw ParseError("gtree line " + std::to_string(lineno) + ": expected 'parent,child'");
    }
    edges.emplace_back(cells[0], cells[1]);
  }
  return GTree::from_edges(edges);
}

GTree load_gtree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open gtree file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_gtree(buf.str());
}

std::vector<PercentilePair> default_percentile_pairs() {
  return {{0, 100}, {1, 99}, {5, 95}, {10, 90}, {25, 75}};
}

double percentile(std::span<const double> sorted, double pct) {
  if (sorted.empty()) throw DomainError("percentile of an empty sample");
  if (!(pct >= 0 && pct <= 100)) throw ArgumentError("percentile outside [0, 100]");
  const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DomainLadder DomainLadder::build(std::span<const double> column,
                                 std::span<const PercentilePair> pairs) {
  std::vector<double> values;
  values.reserve(column.size());
  for (double v : column) {
    if (!std::isnan(v)) values.push_back(v);
  }
  if (values.empty()) throw DomainError("cannot build a domain ladder over an all-missing column");
  std::sort(values.begin(), values.end());

  DomainLadder ladder;
  ladder.levels_.push_back({values.front(), values.back()});
  const PercentilePair* prev = nullptr;
  for (const auto& p : pairs) {
    if (!(p.low >= 0 && p.low <= p.high && p.high <= 100)) {
      throw ArgumentError("invalid percentile pair (" + format_number(p.low) + ", " +
                          format_number(p.high) + ")");
    }
    if (prev && (p.low < prev->low || p.high > prev->high)) {
      throw ArgumentError("percentile pairs must be ordered outermost to innermost");
    }
    prev = &p;
    Interval level{percentile(values, p.low), percentile(values, p.high)};
    const Interval& outer = ladder.levels_.back();
    level.lo = std::clamp(level.lo, outer.lo, outer.hi);
    level.hi = std::clamp(level.hi, level.lo, outer.hi);
    if (level != outer) ladder.levels_.push_back(level);
  }
  return ladder;
}

const Interval& DomainLadder::smallest_enclosing(const Interval& range) const {
  if (!outermost().contains(range)) {
    throw DomainError("range [" + format_number(range.lo) + ", " + format_number(range.hi) +
                      "] is outside the column domain");
  }
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
    if (it->contains(range)) return *it;
  }
  return outermost();
}

std::string render_interval(const Interval& interval) {
  if (interval.lo == interval.hi) return format_number(interval.lo);
  return format_number(interval.lo) + "-" + format_number(interval.hi);
}

}  // namespace kanon
