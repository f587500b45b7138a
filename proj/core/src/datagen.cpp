#include "setquest/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace setquest {
namespace {

// std::uniform_int_distribution is implementation-defined; this keeps output identical
// across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

class Drawer {
 public:
  Drawer(const GenConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {}

  // An entity not already in `members`.
  std::uint64_t draw(const std::unordered_set<std::uint64_t>& members) {
    if (cfg_.universe == 0) return next_fresh_++;
    for (;;) {
      std::uint64_t e = uniform_below(rng_, cfg_.universe);
      if (!members.contains(e)) return e;
    }
  }

 private:
  const GenConfig& cfg_;
  std::mt19937_64& rng_;
  std::uint64_t next_fresh_ = 0;
};

std::vector<std::uint64_t> make_set(const GenConfig& cfg, const std::vector<std::vector<std::uint64_t>>& prior,
                                    std::mt19937_64& rng, Drawer& drawer) {
  const std::size_t s = cfg.size_lo + uniform_below(rng, cfg.size_hi - cfg.size_lo + 1);
  const auto copies = static_cast<std::size_t>(std::floor(cfg.alpha * static_cast<double>(s) + 1e-9));
  std::unordered_set<std::uint64_t> members;
  std::vector<std::uint64_t> out;
  out.reserve(s + 1);
  if (!prior.empty() && copies > 0) {
    std::vector<std::uint64_t> source = prior[uniform_below(rng, prior.size())];
    const std::size_t take = std::min(copies, source.size());
    for (std::size_t i = 0; i < take; ++i) {  // partial Fisher-Yates
      std::swap(source[i], source[i + uniform_below(rng, source.size() - i)]);
      out.push_back(source[i]);
      members.insert(source[i]);
    }
  }
  while (out.size() < s) {
    auto e = drawer.draw(members);
    out.push_back(e);
    members.insert(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void GenConfig::validate() const {
  if (n < 1) throw std::invalid_argument("generator: n must be >= 1");
  if (size_lo < 1 || size_lo > size_hi) throw std::invalid_argument("generator: need 1 <= size_lo <= size_hi");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("generator: alpha must lie in [0, 1)");
  if (universe != 0 && universe < 2 * (size_hi + 1)) {
    throw std::invalid_argument("generator: universe too small for the requested set sizes");
  }
}

std::vector<RawSet> generate_sets(const GenConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  Drawer drawer(cfg, rng);
  std::vector<std::vector<std::uint64_t>> sets;
  std::set<std::vector<std::uint64_t>> seen;
  sets.reserve(cfg.n);

  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::vector<std::uint64_t> s;
    bool unique = false;
    for (int attempt = 0; attempt < 100 && !unique; ++attempt) {
      s = make_set(cfg, sets, rng, drawer);
      unique = !seen.contains(s);
    }
    // Still colliding: grow the last draw by one entity until it is new.
    while (!unique) {
      std::unordered_set<std::uint64_t> members(s.begin(), s.end());
      s.push_back(drawer.draw(members));
      std::sort(s.begin(), s.end());
      unique = !seen.contains(s);
    }
    seen.insert(s);
    sets.push_back(std::move(s));
  }

  std::vector<RawSet> out;
  out.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    RawSet r{"s" + std::to_string(i), {}};
    r.elements.reserve(sets[i].size());
    for (auto e : sets[i]) r.elements.push_back("e" + std::to_string(e));
    out.push_back(std::move(r));
  }
  return out;
}

Collection generate(const GenConfig& cfg, const LoadOptions& options) {
  return Collection::from_sets(generate_sets(cfg), options);
}

CollectionStats stats(const Collection& c, std::size_t sample_pairs, std::uint64_t seed) {
  if (c.set_count() == 0) throw std::invalid_argument("stats: empty collection");
  CollectionStats st;
  st.n = c.set_count();
  st.m = c.entity_count();
  st.size_min = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  for (const auto& s : c.sets()) {
    st.size_min = std::min(st.size_min, s.elements.size());
    st.size_max = std::max(st.size_max, s.elements.size());
    total += s.elements.size();
  }
  st.size_mean = static_cast<double>(total) / static_cast<double>(st.n);
  if (st.n < 2) return st;

  auto jaccard = [&](const SetRecord& a, const SetRecord& b) {
    std::size_t common = 0;
    auto i = a.elements.begin(), j = b.elements.begin();
    while (i != a.elements.end() && j != b.elements.end()) {
      if (*i < *j) {
        ++i;
      } else if (*j < *i) {
        ++j;
      } else {
        ++common, ++i, ++j;
      }
    }
    return static_cast<double>(common) / static_cast<double>(a.elements.size() + b.elements.size() - common);
  };

  double sum = 0.0;
  const std::size_t all_pairs = st.n * (st.n - 1) / 2;
  if (all_pairs <= sample_pairs) {
    for (std::size_t i = 0; i < st.n; ++i)
      for (std::size_t j = i + 1; j < st.n; ++j) sum += jaccard(c.sets()[i], c.sets()[j]);
    st.pairs_sampled = all_pairs;
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t p = 0; p < sample_pairs; ++p) {
      std::size_t i = uniform_below(rng, st.n);
      std::size_t j = uniform_below(rng, st.n - 1);
      if (j >= i) ++j;
      sum += jaccard(c.sets()[i], c.sets()[j]);
    }
    st.pairs_sampled = sample_pairs;
  }
  st.mean_jaccard = sum / static_cast<double>(st.pairs_sampled);
  return st;
}

}  // namespace setquest
