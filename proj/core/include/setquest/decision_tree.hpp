#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "setquest/bounds.hpp"
#include "setquest/collection.hpp"

namespace setquest {

/// Full binary decision tree stored as a flat node arena. Internal nodes ask about an
/// entity (yes -> sets containing it); leaves name a set.
class DecisionTree {
 public:
  using NodeIndex = std::uint32_t;

  struct Node {
    std::optional<EntityId> entity;  // empty for leaves
    SetId set{};                     // leaves only
    NodeIndex yes = 0;
    NodeIndex no = 0;
    bool is_leaf() const { return !entity.has_value(); }
  };

  DecisionTree() = default;
  static DecisionTree leaf(SetId s);
  static DecisionTree join(EntityId e, const DecisionTree& yes, const DecisionTree& no);

  // Low-level construction; children must be added before their parent.
  NodeIndex add_leaf(SetId s);
  NodeIndex add_internal(EntityId e, NodeIndex yes, NodeIndex no);
  void set_root(NodeIndex root) { root_ = root; }

  bool empty() const { return nodes_.empty(); }
  NodeIndex root() const { return root_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  std::size_t node_count() const { return nodes_.size(); }

  std::size_t leaf_count() const;
  std::size_t internal_count() const;
  /// (set, depth) for every leaf, in left-to-right (yes-first) order.
  std::vector<std::pair<SetId, int>> leaf_depths() const;
  /// depth -> number of leaves.
  std::map<int, std::size_t> depth_histogram() const;

  /// Throws Error unless the tree is a well-formed full binary tree whose leaves are
  /// distinct sets and every node is reachable exactly once from the root.
  void validate() const;

  /// Structural equality (same shape, labels, and leaves), independent of arena layout.
  friend bool operator==(const DecisionTree& a, const DecisionTree& b);

 private:
  NodeIndex copy_subtree(const DecisionTree& from, NodeIndex at);
  std::vector<Node> nodes_;
  NodeIndex root_ = 0;
};

/// AD: mean leaf depth (exact rational). H: maximum leaf depth. A lone leaf costs 0.
Bound tree_cost(const DecisionTree& t, CostMetric metric);

/// Checks that every root-to-leaf path is consistent with the leaf set's membership
/// and that the leaves are exactly the sets of `c`.
void check_against(const DecisionTree& t, const SubCollection& c);

class InconsistentAnswersError : public Error {
 public:
  using Error::Error;
};

/// Follows answers from the root to a leaf. With `verify`, the leaf set is confirmed
/// against the answer for every entity of the collection; a mismatch throws
/// InconsistentAnswersError.
SetId route(const DecisionTree& t, const Collection& c, const std::function<bool(EntityId)>& answers,
            bool verify = true);

/// {"entity": label, "yes": ..., "no": ...} | {"set": label}
nlohmann::json tree_to_json(const DecisionTree& t, const Collection& c);
/// Throws ParseError for malformed documents or unknown labels.
DecisionTree tree_from_json(const nlohmann::json& doc, const Collection& c);

}  // namespace setquest
