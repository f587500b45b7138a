#include "setquest/decision_tree.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

namespace setquest {

DecisionTree DecisionTree::leaf(SetId s) {
  DecisionTree t;
  t.root_ = t.add_leaf(s);
  return t;
}

DecisionTree DecisionTree::join(EntityId e, const DecisionTree& yes, const DecisionTree& no) {
  DecisionTree t;
  t.nodes_.reserve(yes.nodes_.size() + no.nodes_.size() + 1);
  NodeIndex y = t.copy_subtree(yes, yes.root_);
  NodeIndex n = t.copy_subtree(no, no.root_);
  t.root_ = t.add_internal(e, y, n);
  return t;
}

DecisionTree::NodeIndex DecisionTree::copy_subtree(const DecisionTree& from, NodeIndex at) {
  // Post-order copy with an explicit stack; trees can be thousands of levels deep.
  std::vector<std::pair<NodeIndex, bool>> stack{{at, false}};
  std::vector<NodeIndex> built;
  while (!stack.empty()) {
    auto [i, expanded] = stack.back();
    stack.pop_back();
    const Node& n = from.nodes_.at(i);
    if (n.is_leaf()) {
      built.push_back(add_leaf(n.set));
    } else if (!expanded) {
      stack.push_back({i, true});
      stack.push_back({n.no, false});
      stack.push_back({n.yes, false});
    } else {
      NodeIndex no = built.back();
      built.pop_back();
      NodeIndex yes = built.back();
      built.pop_back();
      built.push_back(add_internal(*n.entity, yes, no));
    }
  }
  return built.back();
}

DecisionTree::NodeIndex DecisionTree::add_leaf(SetId s) {
  nodes_.push_back(Node{std::nullopt, s, 0, 0});
  return static_cast<NodeIndex>(nodes_.size() - 1);
}

DecisionTree::NodeIndex DecisionTree::add_internal(EntityId e, NodeIndex yes, NodeIndex no) {
  nodes_.push_back(Node{e, SetId{}, yes, no});
  return static_cast<NodeIndex>(nodes_.size() - 1);
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t DecisionTree::internal_count() const { return nodes_.size() - leaf_count(); }

std::vector<std::pair<SetId, int>> DecisionTree::leaf_depths() const {
  std::vector<std::pair<SetId, int>> out;
  if (nodes_.empty()) return out;
  std::vector<std::pair<NodeIndex, int>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    const Node& n = nodes_.at(i);
    if (n.is_leaf()) {
      out.emplace_back(n.set, depth);
    } else {
      stack.push_back({n.no, depth + 1});
      stack.push_back({n.yes, depth + 1});
    }
  }
  return out;
}

std::map<int, std::size_t> DecisionTree::depth_histogram() const {
  std::map<int, std::size_t> h;
  for (const auto& [s, d] : leaf_depths()) ++h[d];
  return h;
}

void DecisionTree::validate() const {
  if (nodes_.empty()) throw Error("decision tree: empty");
  if (root_ >= nodes_.size()) throw Error("decision tree: root out of range");
  std::vector<bool> seen(nodes_.size(), false);
  std::set<SetId> leaves;
  std::vector<NodeIndex> stack{root_};
  std::size_t visited = 0;
  while (!stack.empty()) {
    NodeIndex i = stack.back();
    stack.pop_back();
    if (i >= nodes_.size()) throw Error("decision tree: child index out of range");
    if (seen[i]) throw Error("decision tree: node reachable twice");
    seen[i] = true;
    ++visited;
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      if (!leaves.insert(n.set).second) throw Error("decision tree: set appears in two leaves");
    } else {
      stack.push_back(n.no);
      stack.push_back(n.yes);
    }
  }
  if (visited != nodes_.size()) throw Error("decision tree: unreachable nodes");
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  std::vector<std::pair<DecisionTree::NodeIndex, DecisionTree::NodeIndex>> stack{{a.root_, b.root_}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const auto& x = a.nodes_.at(i);
    const auto& y = b.nodes_.at(j);
    if (x.is_leaf() != y.is_leaf()) return false;
    if (x.is_leaf()) {
      if (x.set != y.set) return false;
    } else {
      if (*x.entity != *y.entity) return false;
      stack.push_back({x.yes, y.yes});
      stack.push_back({x.no, y.no});
    }
  }
  return true;
}

Bound tree_cost(const DecisionTree& t, CostMetric metric) {
  t.validate();
  auto depths = t.leaf_depths();
  if (metric == CostMetric::kHeight) {
    int h = 0;
    for (const auto& [s, d] : depths) h = std::max(h, d);
    return Bound(metric, Rational(h));
  }
  std::int64_t total = 0;
  for (const auto& [s, d] : depths) total += d;
  return Bound(metric, Rational(total, static_cast<std::int64_t>(depths.size())));
}

void check_against(const DecisionTree& t, const SubCollection& c) {
  t.validate();
  const Collection& coll = c.collection();
  std::vector<SetId> leaves;
  // (node, constraints so far) walk; constraints checked at each leaf.
  struct Frame {
    DecisionTree::NodeIndex node;
    std::vector<std::pair<EntityId, bool>> path;
  };
  std::vector<Frame> stack{{t.root(), {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const auto& n = t.node(f.node);
    if (n.is_leaf()) {
      for (const auto& [e, yes] : f.path) {
        if (coll.contains(n.set, e) != yes) {
          throw Error("decision tree: leaf " + coll.set_label(n.set) + " contradicts its path at entity " +
                      coll.entity_label(e));
        }
      }
      leaves.push_back(n.set);
      continue;
    }
    Frame yes{n.yes, f.path};
    yes.path.emplace_back(*n.entity, true);
    f.path.emplace_back(*n.entity, false);
    stack.push_back(Frame{n.no, std::move(f.path)});
    stack.push_back(std::move(yes));
  }
  std::sort(leaves.begin(), leaves.end());
  if (!std::equal(leaves.begin(), leaves.end(), c.members().begin(), c.members().end())) {
    throw Error("decision tree: leaves do not match the collection");
  }
}

SetId route(const DecisionTree& t, const Collection& c, const std::function<bool(EntityId)>& answers, bool verify) {
  if (t.empty()) throw Error("decision tree: empty");
  DecisionTree::NodeIndex i = t.root();
  while (!t.node(i).is_leaf()) {
    const auto& n = t.node(i);
    i = answers(*n.entity) ? n.yes : n.no;
  }
  SetId s = t.node(i).set;
  if (verify) {
    for (std::uint32_t e = 0; e < c.entity_count(); ++e) {
      if (answers(EntityId{e}) != c.contains(s, EntityId{e})) {
        throw InconsistentAnswersError("answers match no set (reached " + c.set_label(s) + ", entity " +
                                       c.entity_label(EntityId{e}) + " disagrees)");
      }
    }
  }
  return s;
}

nlohmann::json tree_to_json(const DecisionTree& t, const Collection& c) {
  t.validate();
  auto emit = [&](auto&& self, DecisionTree::NodeIndex i) -> nlohmann::json {
    const auto& n = t.node(i);
    if (n.is_leaf()) return nlohmann::json{{"set", c.set_label(n.set)}};
    nlohmann::json j;
    j["entity"] = c.entity_label(*n.entity);
    j["yes"] = self(self, n.yes);
    j["no"] = self(self, n.no);
    return j;
  };
  return emit(emit, t.root());
}

DecisionTree tree_from_json(const nlohmann::json& doc, const Collection& c) {
  DecisionTree t;
  auto parse = [&](auto&& self, const nlohmann::json& j) -> DecisionTree::NodeIndex {
    if (!j.is_object()) throw ParseError("tree node must be an object");
    if (j.contains("set")) {
      if (j.size() != 1 || !j["set"].is_string()) throw ParseError("leaf must be exactly {\"set\": label}");
      auto s = c.find_set(j["set"].get<std::string>());
      if (!s) throw ParseError("unknown set label '" + j["set"].get<std::string>() + "'");
      return t.add_leaf(*s);
    }
    if (!j.contains("entity") || !j["entity"].is_string()) throw ParseError("internal node needs \"entity\"");
    if (!j.contains("yes") || !j.contains("no")) {
      throw ParseError("internal node '" + j["entity"].get<std::string>() + "' must have both yes and no children");
    }
    auto e = c.find_entity(j["entity"].get<std::string>());
    if (!e) throw ParseError("unknown entity label '" + j["entity"].get<std::string>() + "'");
    auto yes = self(self, j["yes"]);
    auto no = self(self, j["no"]);
    return t.add_internal(*e, yes, no);
  };
  t.set_root(parse(parse, doc));
  try {
    t.validate();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  return t;
}

}  // namespace setquest
