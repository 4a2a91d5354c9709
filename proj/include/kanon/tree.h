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
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kanon/funnel.h"
#include "kanon/hierarchy.h"
#include "kanon/partition.h"

namespace kanon {

// Path-based node id: NaN-pattern root index followed by child slots. Ids
// depend only on the tree shape, never on task completion order.
using NodePath = std::vector<std::uint32_t>;

std::string format_path(const NodePath& path);

struct TreeNode;

struct InternalNode {
  ProposedCut cut;
  std::size_t size = 0;
  std::vector<TreeNode> children;
};

struct LeafNode {
  Partition partition;
  std::vector<GeneralizedValue> values;
};

struct SuppressedNode {
  Partition partition;
  // Set when the partition was a NaN-pattern root smaller than a valid class.
  bool forced = false;
};

// Placeholder for a child handed to the task queue with a fixed allocation.
struct DeferredNode {
  std::shared_ptr<const Partition> partition;
  std::size_t allocation = 0;
};

struct TreeNode {
  NodePath id;
  std::variant<InternalNode, LeafNode, SuppressedNode, DeferredNode> body;

  bool is_deferred() const { return std::holds_alternative<DeferredNode>(body); }
};

class MondrianTree {
 public:
  MondrianTree() = default;
  explicit MondrianTree(std::vector<TreeNode> roots) : roots_(std::move(roots)) {}

  const std::vector<TreeNode>& roots() const { return roots_; }

  const TreeNode* find(const NodePath& path) const;

  // Replaces the deferred node at `path` with `subtree`. The subtree's id
  // must equal `path`. ContractViolation if the node is missing or is not a
  // deferred placeholder.
  void stitch_in_subtree(const NodePath& path, TreeNode subtree);

  bool has_deferred() const;
  std::vector<NodePath> deferred_paths() const;

  // Depth-first, children in slot order.
  void visit(const std::function<void(const TreeNode&)>& fn) const;

  std::size_t node_count() const;

 private:
  TreeNode* find_mutable(const NodePath& path);

  std::vector<TreeNode> roots_;
};

}  // namespace kanon
