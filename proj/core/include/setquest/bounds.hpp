#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "setquest/collection.hpp"
#include "setquest/rational.hpp"

namespace setquest {

/// AD = average leaf depth (expected questions), H = height (worst case).
enum class CostMetric { kAverageDepth, kHeight };

std::string_view to_string(CostMetric m);
/// "ad" | "h" (case-insensitive).
std::optional<CostMetric> parse_metric(std::string_view text);

/// A cost value for one metric: an exact rational, or the +infinity sentinel.
/// Comparing bounds of different metrics is a logic error and throws.
class Bound {
 public:
  Bound(CostMetric metric, Rational value) : metric_(metric), value_(value) {}
  static Bound zero(CostMetric metric) { return Bound(metric, Rational(0)); }
  static Bound infinity(CostMetric metric);

  CostMetric metric() const { return metric_; }
  bool is_infinite() const { return infinite_; }
  /// Finite value; throws on the infinity sentinel.
  const Rational& value() const;

  std::string to_string() const;  // exact: "20/7", "3", "inf"
  std::string to_decimal(int digits = 3) const;
  double to_double() const;

  friend bool operator==(const Bound& a, const Bound& b);
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b);

 private:
  struct InfinityTag {};
  Bound(CostMetric metric, InfinityTag) : metric_(metric), infinite_(true) {}
  CostMetric metric_;
  bool infinite_ = false;
  Rational value_;
};

std::ostream& operator<<(std::ostream& os, const Bound& b);

/// ceil(n * log2(n)) computed exactly; 0 for n <= 1.
std::int64_t ceil_n_log2_n(std::uint64_t n);
/// ceil(log2(n)); 0 for n <= 1.
std::int64_t ceil_log2(std::uint64_t n);

/// Zero-step bound for a collection of `size` sets. Throws std::invalid_argument for size 0.
Bound lb0(std::size_t size, CostMetric metric);

/// Combines per-side bounds of a split into the bound of the parent:
/// AD: (n1*l1 + n2*l2)/(n1+n2) + 1; H: max(l1, l2) + 1. Infinite sides give infinity.
Bound combine_split(std::size_t n1, const Bound& l1, std::size_t n2, const Bound& l2);

/// One-step bound from the split sizes alone.
Bound lb1_from_sizes(std::size_t n1, std::size_t n2, CostMetric metric);

/// One-step bound after asking `e` at the root of `c`. Throws NonInformativeEntityError.
Bound lb1_entity(const SubCollection& c, EntityId e, CostMetric metric);

/// k-step bound of entity `e` by the plain recursive definition (no pruning, no caching;
/// exponential in k). Sub-collections of size 1 contribute 0.
Bound lbk_entity(const SubCollection& c, EntityId e, int k, CostMetric metric);

/// k-step bound of the collection: lb0 for k = 0, otherwise the minimum of lbk_entity
/// over informative entities; 0 for a single set.
Bound lbk_collection(const SubCollection& c, int k, CostMetric metric);

/// Largest acceptable (k-1)-step bound of the first side C1 of a split for the
/// entity to still beat `aflv` (the best k-step bound found so far).
/// AD: ((aflv-1)*n - n2*lb0(C2)) / n1; H: aflv - 1. Infinite aflv gives infinity.
Bound upper_limit_first(const Bound& aflv, std::size_t n1, const Bound& lb0_c2, std::size_t n2, std::size_t n);

/// Same for the second side once C1's (k-1)-step bound is known.
/// AD: ((aflv-1)*n - n1*lbk1_c1) / n2; H: aflv - 1.
Bound upper_limit_second(const Bound& aflv, std::size_t n2, const Bound& lbk1_c1, std::size_t n1, std::size_t n);

}  // namespace setquest
