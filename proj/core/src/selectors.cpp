#include "setquest/selectors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace setquest {

// --- StrategySpec ----------------------------------------------------------

bool StrategySpec::is_lookahead() const {
  return kind == StrategyKind::kKlp || kind == StrategyKind::kKlple || kind == StrategyKind::kKlplve ||
         kind == StrategyKind::kGainKUnpruned;
}

void StrategySpec::validate() const {
  if (is_lookahead()) {
    if (k < 1) throw std::invalid_argument("strategy: lookahead needs k >= 1");
  } else if (k != 0) {
    throw std::invalid_argument("strategy: k given for a non-lookahead strategy");
  }
  if (uses_q()) {
    if (q < 1) throw std::invalid_argument("strategy: q must be >= 1");
  } else if (q != 0) {
    throw std::invalid_argument("strategy: q given for a strategy without an entity budget");
  }
}

namespace {

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("strategy: bad integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

StrategySpec StrategySpec::parse(std::string_view text, CostMetric metric) {
  static const std::map<std::string_view, StrategyKind, std::less<>> kinds = {
      {"infogain", StrategyKind::kInfoGain}, {"indg", StrategyKind::kIndg},
      {"mosteven", StrategyKind::kMostEven}, {"klp", StrategyKind::kKlp},
      {"klple", StrategyKind::kKlple},       {"klpve", StrategyKind::kKlplve},
      {"gaink", StrategyKind::kGainKUnpruned}, {"bruteforce", StrategyKind::kBruteForce},
  };
  StrategySpec spec;
  spec.metric = metric;
  std::string_view name = text;
  std::string_view params;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    params = text.substr(colon + 1);
  }
  auto it = kinds.find(name);
  if (it == kinds.end()) throw std::invalid_argument("strategy: unknown kind '" + std::string(name) + "'");
  spec.kind = it->second;
  bool seen_k = false;
  bool seen_q = false;
  while (!params.empty()) {
    auto comma = params.find(',');
    std::string_view item = params.substr(0, comma);
    params = comma == std::string_view::npos ? std::string_view{} : params.substr(comma + 1);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("strategy: expected key=value, got '" + std::string(item) + "'");
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "k" && !seen_k) {
      spec.k = parse_int(value, "k");
      seen_k = true;
    } else if (key == "q" && !seen_q) {
      spec.q = parse_int(value, "q");
      seen_q = true;
    } else {
      throw std::invalid_argument("strategy: unexpected parameter '" + std::string(item) + "'");
    }
  }
  if (spec.is_lookahead() && !seen_k) throw std::invalid_argument("strategy: '" + std::string(name) + "' requires k");
  if (spec.uses_q() && !seen_q) throw std::invalid_argument("strategy: '" + std::string(name) + "' requires q");
  spec.validate();
  return spec;
}

std::string StrategySpec::to_string() const {
  switch (kind) {
    case StrategyKind::kInfoGain: return "infogain";
    case StrategyKind::kIndg: return "indg";
    case StrategyKind::kMostEven: return "mosteven";
    case StrategyKind::kKlp: return "klp:k=" + std::to_string(k);
    case StrategyKind::kKlple: return "klple:k=" + std::to_string(k) + ",q=" + std::to_string(q);
    case StrategyKind::kKlplve: return "klpve:k=" + std::to_string(k) + ",q=" + std::to_string(q);
    case StrategyKind::kGainKUnpruned: return "gaink:k=" + std::to_string(k);
    case StrategyKind::kBruteForce: return "bruteforce";
  }
  return "?";
}

SearchCounters& SearchCounters::operator+=(const SearchCounters& o) {
  candidates_considered += o.candidates_considered;
  candidates_pruned_by_sort_cutoff += o.candidates_pruned_by_sort_cutoff;
  recursive_calls_pruned_by_upper_limit += o.recursive_calls_pruned_by_upper_limit;
  cache_hits += o.cache_hits;
  cache_misses += o.cache_misses;
  expansions += o.expansions;
  root_candidates += o.root_candidates;
  root_pruned_by_sort_cutoff += o.root_pruned_by_sort_cutoff;
  return *this;
}

// --- MemoCache -------------------------------------------------------------

std::size_t MemoCache::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = FingerprintHash{}(k.fingerprint);
  h ^= (static_cast<std::size_t>(k.k) * 0x9e3779b97f4a7c15ULL) + (h << 6) + (h >> 2);
  h ^= (static_cast<std::size_t>(k.variant) << 32 | static_cast<std::size_t>(k.q)) + (h << 6) + (h >> 2);
  h ^= k.exclusion + (h << 6) + (h >> 2);
  return h;
}

std::optional<MemoCache::Entry> MemoCache::find(const Key& key) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void MemoCache::store(const Key& key, const Entry& entry) {
  std::unique_lock lock(mutex_);
  entries_.insert_or_assign(key, entry);
}

void MemoCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

std::size_t MemoCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

// --- scores ----------------------------------------------------------------

namespace {

std::pair<std::size_t, std::size_t> checked_split(const SubCollection& c, EntityId e) {
  Partition p = partition(c, e);
  if (p.positive.empty() || p.negative.empty()) {
    throw NonInformativeEntityError("entity " + c.collection().entity_label(e) + " does not split the collection");
  }
  return {p.positive.size(), p.negative.size()};
}

double xlog2x(std::size_t x) { return x <= 1 ? 0.0 : static_cast<double>(x) * std::log2(static_cast<double>(x)); }

std::uint32_t imbalance(std::uint32_t pos, std::uint32_t n) { return pos * 2 > n ? pos * 2 - n : n - pos * 2; }

}  // namespace

double info_gain_from_sizes(std::size_t n1, std::size_t n2) {
  const std::size_t n = n1 + n2;
  // Order the two terms canonically so mirrored splits give bit-identical scores.
  const std::size_t lo = std::min(n1, n2);
  const std::size_t hi = std::max(n1, n2);
  return std::log2(static_cast<double>(n)) - (xlog2x(lo) + xlog2x(hi)) / static_cast<double>(n);
}

std::uint64_t indg_from_sizes(std::size_t n1, std::size_t n2) {
  return (static_cast<std::uint64_t>(n1) * (n1 - (n1 > 0)) + static_cast<std::uint64_t>(n2) * (n2 - (n2 > 0))) / 2;
}

double score_info_gain(const SubCollection& c, EntityId e) {
  auto [n1, n2] = checked_split(c, e);
  return info_gain_from_sizes(n1, n2);
}

std::uint64_t score_indg(const SubCollection& c, EntityId e) {
  auto [n1, n2] = checked_split(c, e);
  return indg_from_sizes(n1, n2);
}

std::vector<EntityId> sort_entities_most_even(const SubCollection& c) {
  auto counts = informative_counts(c);
  if (counts.empty()) throw Error("no informative entity: the collection contains indistinguishable sets");
  const auto n = static_cast<std::uint32_t>(c.size());
  std::stable_sort(counts.begin(), counts.end(), [n](const EntityCount& a, const EntityCount& b) {
    return imbalance(a.count, n) < imbalance(b.count, n);
  });
  std::vector<EntityId> out;
  out.reserve(counts.size());
  for (const auto& ec : counts) out.push_back(ec.entity);
  return out;
}

// --- lookahead search ------------------------------------------------------

namespace {

enum Variant : int { kVariantPruned = 1, kVariantUnpruned = 2 };

struct Candidate {
  EntityId entity;
  std::uint32_t positive = 0;
  std::uint32_t imbalance = 0;
  Bound lb1 = Bound::zero(CostMetric::kAverageDepth);
};

std::uint64_t exclusion_digest(std::span<const EntityId> excluded) {
  if (excluded.empty()) return 0;
  std::vector<SetId> as_ids;
  as_ids.reserve(excluded.size());
  for (EntityId e : excluded) as_ids.push_back(SetId{e.value});
  Fingerprint f = fingerprint(as_ids);
  return f.hi ^ f.lo ^ 1;
}

struct SearchResult {
  std::optional<EntityId> entity;
  Bound bound;
  bool unsplittable = false;  // no eligible entity: bound is lb0, not a search result
};

class Lookahead {
 public:
  Lookahead(const StrategySpec& spec, MemoCache& cache, std::span<const EntityId> excluded, SearchCounters& counters)
      : spec_(spec),
        metric_(spec.metric),
        cache_(cache),
        excluded_(excluded),
        exclusion_(exclusion_digest(excluded)),
        counters_(counters) {
    if (spec.tie_seed) rng_.emplace(*spec.tie_seed);
  }

  // Candidates in visiting order: non-decreasing 1-step bound, then most even split,
  // then ascending id (or seeded random among exact ties).
  std::vector<Candidate> ordered_candidates(const SubCollection& c) {
    auto counts = informative_counts(c, excluded_);
    const auto n = static_cast<std::uint32_t>(c.size());
    std::vector<Candidate> out;
    out.reserve(counts.size());
    for (const auto& ec : counts) {
      out.push_back(Candidate{ec.entity, ec.count, imbalance(ec.count, n), lb1_from_sizes(ec.count, n - ec.count, metric_)});
    }
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
      if (a.lb1 != b.lb1) return a.lb1 < b.lb1;
      if (a.imbalance != b.imbalance) return a.imbalance < b.imbalance;
      return a.entity < b.entity;
    });
    if (rng_) {
      std::size_t i = 0;
      while (i < out.size()) {
        std::size_t j = i + 1;
        while (j < out.size() && out[j].lb1 == out[i].lb1 && out[j].imbalance == out[i].imbalance) ++j;
        std::shuffle(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(j), *rng_);
        i = j;
      }
    }
    return out;
  }

  int budget_at(int depth) const {
    switch (spec_.kind) {
      case StrategyKind::kKlple: return spec_.q;
      case StrategyKind::kKlplve: return depth == 0 ? spec_.q : 1;
      default: return 0;
    }
  }

  // Child (k-1)-step bound; singletons cost nothing.
  SearchResult child(const SubCollection& c, int k, const Bound& ul, int depth, bool pruned) {
    if (c.size() == 1) return SearchResult{std::nullopt, Bound::zero(metric_), true};
    return pruned ? run_pruned(c, k, ul, depth) : run_unpruned(c, k, depth);
  }

  SearchResult run_pruned(const SubCollection& c, int k, Bound ul, int depth) {
    const std::size_t n = c.size();
    if (!ul.is_infinite() && ul.value() <= Rational(0)) {
      ++counters_.recursive_calls_pruned_by_upper_limit;
      return SearchResult{std::nullopt, ul};
    }
    const int steps = std::min<int>(k, static_cast<int>(n) - 1);
    const int budget = budget_at(depth);
    const MemoCache::Key key{c.fingerprint(), steps, kVariantPruned, budget, exclusion_};

    if (auto hit = cache_.find(key)) {
      if (ul <= hit->bound) {
        ++counters_.cache_hits;
        return SearchResult{std::nullopt, hit->bound};
      }
      if (hit->entity) {
        ++counters_.cache_hits;
        return SearchResult{hit->entity, hit->bound};
      }
      // A failure under a tighter limit says nothing about this looser one.
    }
    ++counters_.cache_misses;
    ++counters_.expansions;

    auto candidates = ordered_candidates(c);
    if (candidates.empty()) return SearchResult{std::nullopt, lb0(n, metric_), true};
    if (budget > 0 && candidates.size() > static_cast<std::size_t>(budget)) candidates.resize(static_cast<std::size_t>(budget));
    if (depth == 0) counters_.root_candidates += candidates.size();

    if (steps == 1) {
      const Candidate& best = candidates.front();
      ++counters_.candidates_considered;
      cache_.store(key, MemoCache::Entry{best.entity, best.lb1});
      if (ul <= best.lb1) return SearchResult{std::nullopt, best.lb1};
      return SearchResult{best.entity, best.lb1};
    }

    std::optional<EntityId> chosen;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const Candidate& cand = candidates[i];
      if (cand.lb1 >= ul) {
        counters_.candidates_pruned_by_sort_cutoff += candidates.size() - i;
        if (depth == 0) counters_.root_pruned_by_sort_cutoff += candidates.size() - i;
        break;
      }
      ++counters_.candidates_considered;
      auto [pos, neg] = split(c, cand.entity);

      Bound l_pos = Bound::zero(metric_);
      if (pos.size() > 1) {
        Bound ul_pos = upper_limit_first(ul, pos.size(), lb0(neg.size(), metric_), neg.size(), n);
        SearchResult r = child(pos, steps - 1, ul_pos, depth + 1, true);
        if (!r.entity && !r.unsplittable) {
          ++counters_.recursive_calls_pruned_by_upper_limit;
          continue;
        }
        l_pos = r.bound;
      }
      Bound l_neg = Bound::zero(metric_);
      if (neg.size() > 1) {
        Bound ul_neg = upper_limit_second(ul, neg.size(), l_pos, pos.size(), n);
        SearchResult r = child(neg, steps - 1, ul_neg, depth + 1, true);
        if (!r.entity && !r.unsplittable) {
          ++counters_.recursive_calls_pruned_by_upper_limit;
          continue;
        }
        l_neg = r.bound;
      }
      Bound l = combine_split(pos.size(), l_pos, neg.size(), l_neg);
      if (l < ul) {
        ul = l;
        chosen = cand.entity;
      }
    }
    cache_.store(key, MemoCache::Entry{chosen, ul});
    return SearchResult{chosen, ul};
  }

  SearchResult run_unpruned(const SubCollection& c, int k, int depth) {
    const std::size_t n = c.size();
    const int steps = std::min<int>(k, static_cast<int>(n) - 1);
    const MemoCache::Key key{c.fingerprint(), steps, kVariantUnpruned, 0, exclusion_};
    if (auto hit = cache_.find(key)) {
      ++counters_.cache_hits;
      return SearchResult{hit->entity, hit->bound, !hit->entity};
    }
    ++counters_.cache_misses;
    ++counters_.expansions;

    auto candidates = ordered_candidates(c);
    if (candidates.empty()) {
      Bound b = lb0(n, metric_);
      cache_.store(key, MemoCache::Entry{std::nullopt, b});
      return SearchResult{std::nullopt, b, true};
    }
    if (depth == 0) counters_.root_candidates += candidates.size();

    std::optional<EntityId> chosen;
    std::optional<Bound> best;
    for (const Candidate& cand : candidates) {
      ++counters_.candidates_considered;
      Bound l = cand.lb1;
      if (steps > 1) {
        auto [pos, neg] = split(c, cand.entity);
        Bound l_pos = child(pos, steps - 1, Bound::infinity(metric_), depth + 1, false).bound;
        Bound l_neg = child(neg, steps - 1, Bound::infinity(metric_), depth + 1, false).bound;
        l = combine_split(pos.size(), l_pos, neg.size(), l_neg);
      }
      if (!best || l < *best) {
        best = l;
        chosen = cand.entity;
      }
    }
    cache_.store(key, MemoCache::Entry{chosen, *best});
    return SearchResult{chosen, *best};
  }

 private:
  const StrategySpec& spec_;
  CostMetric metric_;
  MemoCache& cache_;
  std::span<const EntityId> excluded_;
  std::uint64_t exclusion_;
  SearchCounters& counters_;
  std::optional<std::mt19937_64> rng_;
};

// Single-pass strategies: best score, ties toward the more even split, then lower id.
SelectionOutcome select_greedy(const SubCollection& c, const StrategySpec& spec, const Bound& ul,
                               std::span<const EntityId> excluded) {
  SelectionOutcome out{std::nullopt, Bound::infinity(spec.metric), {}};
  auto counts = informative_counts(c, excluded);
  const auto n = static_cast<std::uint32_t>(c.size());
  out.counters.root_candidates = counts.size();
  out.counters.candidates_considered = counts.size();
  const EntityCount* best = nullptr;
  double best_score = 0;
  for (const auto& ec : counts) {
    double score = 0;
    switch (spec.kind) {
      case StrategyKind::kInfoGain: score = -info_gain_from_sizes(ec.count, n - ec.count); break;
      case StrategyKind::kIndg: score = static_cast<double>(indg_from_sizes(ec.count, n - ec.count)); break;
      default: score = imbalance(ec.count, n); break;
    }
    bool better = best == nullptr || score < best_score - 1e-12 ||
                  (std::fabs(score - best_score) <= 1e-12 && imbalance(ec.count, n) < imbalance(best->count, n));
    if (better) {
      best = &ec;
      best_score = score;
    }
  }
  if (best == nullptr) return out;
  out.bound = lb1_from_sizes(best->count, n - best->count, spec.metric);
  if (out.bound < ul) out.entity = best->entity;
  return out;
}

}  // namespace

SelectionOutcome select(const SubCollection& c, const StrategySpec& spec, const Bound& upper_limit, MemoCache& cache,
                        std::span<const EntityId> excluded) {
  spec.validate();
  if (c.size() < 2) throw std::invalid_argument("select: need at least two candidate sets");
  if (cache.metric() != spec.metric) throw std::invalid_argument("select: cache metric differs from strategy metric");
  if (upper_limit.metric() != spec.metric) throw std::invalid_argument("select: upper limit metric differs");

  switch (spec.kind) {
    case StrategyKind::kInfoGain:
    case StrategyKind::kIndg:
    case StrategyKind::kMostEven:
      return select_greedy(c, spec, upper_limit, excluded);
    case StrategyKind::kBruteForce: {
      OptimalTree opt = brute_force_optimal(c, spec.metric, excluded);
      SelectionOutcome out{std::nullopt, opt.cost, {}};
      const auto& root = opt.tree.node(opt.tree.root());
      if (!root.is_leaf() && opt.cost < upper_limit) out.entity = root.entity;
      return out;
    }
    default: break;
  }

  SelectionOutcome out{std::nullopt, Bound::infinity(spec.metric), {}};
  Lookahead search(spec, cache, excluded, out.counters);
  SearchResult r = spec.kind == StrategyKind::kGainKUnpruned ? search.run_unpruned(c, spec.k, 0)
                                                             : search.run_pruned(c, spec.k, upper_limit, 0);
  if (r.unsplittable) return out;
  out.bound = r.bound;
  if (spec.kind == StrategyKind::kGainKUnpruned && !(r.bound < upper_limit)) return out;
  out.entity = r.entity;
  return out;
}

SelectionOutcome select(const SubCollection& c, const StrategySpec& spec, MemoCache& cache,
                        std::span<const EntityId> excluded) {
  return select(c, spec, Bound::infinity(spec.metric), cache, excluded);
}

// --- brute force -----------------------------------------------------------

OptimalTree brute_force_optimal(const SubCollection& c, CostMetric metric, std::span<const EntityId> excluded) {
  if (c.empty()) throw std::invalid_argument("brute_force_optimal: empty collection");
  if (c.size() > kBruteForceMaxSets) {
    throw GuardExceededError("brute_force_optimal: " + std::to_string(c.size()) + " sets exceeds the limit of " +
                             std::to_string(kBruteForceMaxSets));
  }
  const Collection& coll = c.collection();
  const auto members = c.members();
  const std::size_t n = members.size();
  const std::uint32_t full = (1U << n) - 1;

  // Distinct membership masks of every eligible entity over the members.
  std::map<std::uint32_t, EntityId> masks;
  for (const auto& ec : informative_counts(c, excluded)) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (coll.contains(members[i], ec.entity)) mask |= 1U << i;
    }
    masks.emplace(mask, ec.entity);  // keeps the lowest id per distinct mask
  }

  // cost[S]: AD -> minimum total leaf depth; H -> minimum height. -1 = unknown.
  std::vector<std::int64_t> cost(full + 1, -1);
  std::vector<std::uint32_t> choice(full + 1, 0);
  constexpr std::int64_t kUnsolvable = std::int64_t{1} << 40;
  auto solve = [&](auto&& self, std::uint32_t s) -> std::int64_t {
    if (cost[s] >= 0) return cost[s];
    if (std::has_single_bit(s)) return cost[s] = 0;
    std::int64_t best = kUnsolvable;
    std::uint32_t best_mask = 0;
    for (const auto& [mask, e] : masks) {
      std::uint32_t yes = s & mask;
      std::uint32_t no = s & ~mask;
      if (yes == 0 || no == 0) continue;
      std::int64_t a = self(self, yes);
      std::int64_t b = self(self, no);
      std::int64_t v = metric == CostMetric::kAverageDepth ? a + b + std::popcount(s) : std::max(a, b) + 1;
      if (v < best) {
        best = v;
        best_mask = mask;
      }
    }
    choice[s] = best_mask;
    return cost[s] = best;
  };
  std::int64_t total = solve(solve, full);
  if (total >= kUnsolvable) throw Error("brute_force_optimal: sets cannot be distinguished");

  DecisionTree tree;
  auto build = [&](auto&& self, std::uint32_t s) -> DecisionTree::NodeIndex {
    if (std::has_single_bit(s)) return tree.add_leaf(members[static_cast<std::size_t>(std::countr_zero(s))]);
    std::uint32_t mask = choice[s];
    auto yes = self(self, s & mask);
    auto no = self(self, s & ~mask);
    return tree.add_internal(masks.at(mask), yes, no);
  };
  tree.set_root(build(build, full));

  Bound b = metric == CostMetric::kAverageDepth ? Bound(metric, Rational(total, static_cast<std::int64_t>(n)))
                                                : Bound(metric, Rational(total));
  return OptimalTree{b, std::move(tree)};
}

}  // namespace setquest
