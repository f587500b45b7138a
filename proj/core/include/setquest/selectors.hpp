#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setquest/bounds.hpp"
#include "setquest/collection.hpp"
#include "setquest/decision_tree.hpp"

namespace setquest {

enum class StrategyKind {
  kInfoGain,
  kIndg,
  kMostEven,
  kKlp,            // k-lookahead with pruning
  kKlple,          // ... with the top-q entities at every depth
  kKlplve,         // ... top-q at the outermost call, top-1 below
  kGainKUnpruned,  // same lookahead, no cutoffs: the speedup baseline
  kBruteForce,
};

struct StrategySpec {
  StrategyKind kind = StrategyKind::kKlp;
  int k = 0;  // lookahead kinds only
  int q = 0;  // kKlple / kKlplve only
  CostMetric metric = CostMetric::kAverageDepth;
  // When set, entities tied on (1-step bound, split balance) are visited in a seeded
  // random order instead of ascending id.
  std::optional<std::uint64_t> tie_seed;

  bool is_lookahead() const;
  bool uses_q() const { return kind == StrategyKind::kKlple || kind == StrategyKind::kKlplve; }
  /// Throws std::invalid_argument when k/q presence or ranges are wrong.
  void validate() const;

  /// Grammar: "infogain" | "indg" | "mosteven" | "klp:k=<int>" | "klple:k=<int>,q=<int>"
  ///        | "klpve:k=<int>,q=<int>" | "gaink:k=<int>" | "bruteforce".
  /// Throws std::invalid_argument on malformed text.
  static StrategySpec parse(std::string_view text, CostMetric metric);
  std::string to_string() const;
};

struct SearchCounters {
  std::uint64_t candidates_considered = 0;            // entities whose k-step bound was evaluated
  std::uint64_t candidates_pruned_by_sort_cutoff = 0;  // skipped because lb1 >= current limit
  std::uint64_t recursive_calls_pruned_by_upper_limit = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t cache_misses = 0;
  std::uint64_t expansions = 0;  // non-cached lookahead invocations (any depth)
  // Outermost call only.
  std::uint64_t root_candidates = 0;
  std::uint64_t root_pruned_by_sort_cutoff = 0;

  SearchCounters& operator+=(const SearchCounters& o);
};

/// Memo of lookahead results keyed by sub-collection, steps, and search variant.
/// An entry with an entity stores that entity's exact k-step bound; an entry without
/// one stores the upper limit the search failed under. Thread-safe; values for a key
/// are canonical, so concurrent writers may race harmlessly.
class MemoCache {
 public:
  struct Key {
    Fingerprint fingerprint;
    int k = 0;
    int variant = 0;
    int q = 0;
    std::uint64_t exclusion = 0;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct Entry {
    std::optional<EntityId> entity;
    Bound bound;
  };

  explicit MemoCache(CostMetric metric) : metric_(metric) {}
  MemoCache(const MemoCache&) = delete;
  MemoCache& operator=(const MemoCache&) = delete;

  CostMetric metric() const { return metric_; }
  std::optional<Entry> find(const Key& key) const;
  void store(const Key& key, const Entry& entry);
  void clear();
  std::size_t size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  CostMetric metric_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Entry, KeyHash> entries_;
};

struct SelectionOutcome {
  std::optional<EntityId> entity;  // empty => every candidate pruned against the limit
  Bound bound;
  SearchCounters counters;
};

// --- scores ----------------------------------------------------------------

/// log2|C| - (|C1| log2|C1| + |C2| log2|C2|) / |C|. Throws NonInformativeEntityError.
double score_info_gain(const SubCollection& c, EntityId e);
/// (|C1|(|C1|-1) + |C2|(|C2|-1)) / 2. Throws NonInformativeEntityError.
std::uint64_t score_indg(const SubCollection& c, EntityId e);

double info_gain_from_sizes(std::size_t n1, std::size_t n2);
std::uint64_t indg_from_sizes(std::size_t n1, std::size_t n2);

/// Informative entities by | |C1| - |C2| | ascending, ties by ascending id.
/// Throws Error when nothing splits (only possible with duplicate sets).
std::vector<EntityId> sort_entities_most_even(const SubCollection& c);

/// Picks the next question for `c` (|c| >= 2). `excluded` (sorted) entities are never
/// chosen, at any lookahead depth. The cache metric must match spec.metric.
SelectionOutcome select(const SubCollection& c, const StrategySpec& spec, const Bound& upper_limit,
                        MemoCache& cache, std::span<const EntityId> excluded = {});

/// select() with an infinite upper limit.
SelectionOutcome select(const SubCollection& c, const StrategySpec& spec, MemoCache& cache,
                        std::span<const EntityId> excluded = {});

struct OptimalTree {
  Bound cost;
  DecisionTree tree;
};

inline constexpr std::size_t kBruteForceMaxSets = 14;

/// Exact minimum-cost tree by memoized search over sub-collections (exponential).
/// Throws GuardExceededError when |c| > kBruteForceMaxSets.
OptimalTree brute_force_optimal(const SubCollection& c, CostMetric metric,
                                std::span<const EntityId> excluded = {});

}  // namespace setquest
