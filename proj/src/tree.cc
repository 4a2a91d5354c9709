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

#include "kanon/tree.h"

#include "kanon/errors.h"

namespace kanon {

std::string format_path(const NodePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back('.');
    out += std::to_string(path[i]);
  }
  return out;
}

namespace {

template <typename Node>
Node* descend(std::vector<Node>& roots, const NodePath& path) {
  if (path.empty() || path[0] >= roots.size()) return nullptr;
  Node* cur = &roots[path[0]];
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto* internal = std::get_if<InternalNode>(&cur->body);
    if (!internal || path[i] >= internal->children.size()) return nullptr;
    cur = &internal->children[path[i]];
  }
  return cur;
}

void visit_node(const TreeNode& n, const std::function<void(const TreeNode&)>& fn) {
  fn(n);
  if (const auto* internal = std::get_if<InternalNode>(&n.body)) {
    for (const auto& c : internal->children) visit_node(c, fn);
  }
}

}  // namespace

const TreeNode* MondrianTree::find(const NodePath& path) const {
  return descend(const_cast<std::vector<TreeNode>&>(roots_), path);
}

TreeNode* MondrianTree::find_mutable(const NodePath& path) { return descend(roots_, path); }

void MondrianTree::stitch_in_subtree(const NodePath& path, TreeNode subtree) {
  TreeNode* target = find_mutable(path);
  if (!target) throw ContractViolation("no node with id " + format_path(path));
  if (!target->is_deferred()) {
    throw ContractViolation("node " + format_path(path) + " is not a deferred cut");
  }
  if (subtree.id != path) {
    throw ContractViolation("subtree id " + format_path(subtree.id) + " does not match " +
                            format_path(path));
  }
  *target = std::move(subtree);
}

bool MondrianTree::has_deferred() const {
  bool found = false;
  visit([&](const TreeNode& n) { found = found || n.is_deferred(); });
  return found;
}

std::vector<NodePath> MondrianTree::deferred_paths() const {
  std::vector<NodePath> out;
  visit([&](const TreeNode& n) {
    if (n.is_deferred()) out.push_back(n.id);
  });
  return out;
}

void MondrianTree::visit(const std::function<void(const TreeNode&)>& fn) const {
  for (const auto& r : roots_) visit_node(r, fn);
}

std::size_t MondrianTree::node_count() const {
  std::size_t n = 0;
  visit([&](const TreeNode&) { ++n; });
  return n;
}

}  // namespace kanon
