#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "setquest/collection.hpp"

namespace setquest {

/// Copy-add generator settings. Each set draws a size s in [size_lo, size_hi], copies
/// floor(alpha * s) elements from one earlier set and adds the rest from the entity
/// universe. `universe` = 0 means every added entity is brand new.
struct GenConfig {
  std::size_t n = 1;
  std::size_t size_lo = 1;
  std::size_t size_hi = 1;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t universe = 1'000'000;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// Deterministic for a given config on every platform. Set labels are "s<i>",
/// entity labels "e<j>".
std::vector<RawSet> generate_sets(const GenConfig& cfg);
Collection generate(const GenConfig& cfg, const LoadOptions& options = {});

struct CollectionStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t size_min = 0;
  double size_mean = 0.0;
  std::size_t size_max = 0;
  double mean_jaccard = 0.0;  // over sampled pairs of distinct sets
  std::size_t pairs_sampled = 0;
};

/// Throws std::invalid_argument for an empty collection.
CollectionStats stats(const Collection& c, std::size_t sample_pairs = 2000, std::uint64_t seed = 1);

}  // namespace setquest
