#include "setquest/tree_builder.hpp"

#include <stdexcept>

namespace setquest {

BuildResult build_tree(const SubCollection& c, const StrategySpec& spec, MemoCache& cache, const BuildOptions& options) {
  spec.validate();
  if (c.empty()) throw std::invalid_argument("build_tree: empty collection");

  BuildResult result;
  if (spec.kind == StrategyKind::kBruteForce) {
    result.tree = brute_force_optimal(c, spec.metric).tree;
    return result;
  }

  // Explicit work stack; node indices of finished subtrees are patched into parents.
  struct Pending {
    SubCollection members;
    std::optional<EntityId> question;  // set once the node has been split
  };
  std::vector<Pending> stack;
  std::vector<DecisionTree::NodeIndex> built;
  DecisionTree& tree = result.tree;
  stack.push_back(Pending{c, std::nullopt});

  while (!stack.empty()) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) {
      throw GuardExceededError("build_tree: time budget exceeded");
    }
    if (options.max_nodes && tree.node_count() >= *options.max_nodes) {
      throw GuardExceededError("build_tree: more than " + std::to_string(*options.max_nodes) + " nodes");
    }
    Pending p = std::move(stack.back());
    stack.pop_back();

    if (p.question) {
      auto no = built.back();
      built.pop_back();
      auto yes = built.back();
      built.pop_back();
      built.push_back(tree.add_internal(*p.question, yes, no));
      continue;
    }
    if (p.members.size() == 1) {
      built.push_back(tree.add_leaf(p.members.members().front()));
      continue;
    }
    SelectionOutcome sel = select(p.members, spec, cache);
    result.counters += sel.counters;
    if (!sel.entity) throw Error("build_tree: no entity splits a sub-collection of " + std::to_string(p.members.size()));
    auto [yes, no] = split(p.members, *sel.entity);
    stack.push_back(Pending{p.members, sel.entity});
    stack.push_back(Pending{std::move(no), std::nullopt});
    stack.push_back(Pending{std::move(yes), std::nullopt});
  }
  tree.set_root(built.back());
  return result;
}

BuildResult build_tree(const SubCollection& c, const StrategySpec& spec, const BuildOptions& options) {
  MemoCache cache(spec.metric);
  return build_tree(c, spec, cache, options);
}

}  // namespace setquest
