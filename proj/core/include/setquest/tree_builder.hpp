#pragma once

#include <chrono>
#include <cstddef>
#include <optional>

#include "setquest/decision_tree.hpp"
#include "setquest/selectors.hpp"

namespace setquest {

struct BuildOptions {
  /// Refuse to grow a tree beyond this many nodes (GuardExceededError).
  std::optional<std::size_t> max_nodes;
  /// Abort with GuardExceededError once the wall clock passes this point.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct BuildResult {
  DecisionTree tree;
  SearchCounters counters;  // summed over every node's selection
};

/// Builds a tree top-down: a lone set becomes a leaf, otherwise the strategy picks the
/// root question (fresh infinite limit, shared cache) and both halves recurse.
BuildResult build_tree(const SubCollection& c, const StrategySpec& spec, MemoCache& cache,
                       const BuildOptions& options = {});

/// Convenience overload with a private cache.
BuildResult build_tree(const SubCollection& c, const StrategySpec& spec, const BuildOptions& options = {});

}  // namespace setquest
