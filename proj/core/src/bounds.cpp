#include "setquest/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace setquest {

std::string_view to_string(CostMetric m) { return m == CostMetric::kAverageDepth ? "ad" : "h"; }

std::optional<CostMetric> parse_metric(std::string_view text) {
  std::string lower;
  for (char ch : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "ad") return CostMetric::kAverageDepth;
  if (lower == "h") return CostMetric::kHeight;
  return std::nullopt;
}

// --- Bound -----------------------------------------------------------------

Bound Bound::infinity(CostMetric metric) { return Bound(metric, InfinityTag{}); }

const Rational& Bound::value() const {
  if (infinite_) throw std::logic_error("bound: value() of infinity");
  return value_;
}

std::string Bound::to_string() const { return infinite_ ? "inf" : value_.to_string(); }

std::string Bound::to_decimal(int digits) const { return infinite_ ? "inf" : value_.to_decimal(digits); }

double Bound::to_double() const { return infinite_ ? HUGE_VAL : value_.to_double(); }

bool operator==(const Bound& a, const Bound& b) {
  if (a.metric_ != b.metric_) throw std::logic_error("bound: comparing bounds of different metrics");
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
  if (a.metric_ != b.metric_) throw std::logic_error("bound: comparing bounds of different metrics");
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  return a.value_ <=> b.value_;
}

std::ostream& operator<<(std::ostream& os, const Bound& b) {
  return os << b.to_string() << (b.metric() == CostMetric::kAverageDepth ? " (ad)" : " (h)");
}

// --- ceilings --------------------------------------------------------------

std::int64_t ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<std::int64_t>(std::bit_width(n - 1));
}

std::int64_t ceil_n_log2_n(std::uint64_t n) {
  if (n <= 1) return 0;
  if (std::has_single_bit(n)) return static_cast<std::int64_t>(n) * std::countr_zero(n);
  const long double v = static_cast<long double>(n) * std::log2(static_cast<long double>(n));
  const long double nearest = std::round(v);
  // n*log2(n) is irrational here; only a value within rounding noise of an integer needs
  // the exact test: ceil = t  iff  2^(t-1) < n^n <= 2^t.
  if (std::fabs(v - nearest) > 1e-6L) return static_cast<std::int64_t>(std::ceil(v));
  using boost::multiprecision::cpp_int;
  const auto t = static_cast<std::int64_t>(nearest);
  cpp_int nn = boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(n));
  cpp_int two_t = cpp_int(1) << t;
  return nn <= two_t ? t : t + 1;
}

Bound lb0(std::size_t size, CostMetric metric) {
  if (size == 0) throw std::invalid_argument("lb0: empty collection");
  if (metric == CostMetric::kHeight) return Bound(metric, Rational(ceil_log2(size)));
  return Bound(metric, Rational(ceil_n_log2_n(size), static_cast<std::int64_t>(size)));
}

Bound combine_split(std::size_t n1, const Bound& l1, std::size_t n2, const Bound& l2) {
  const CostMetric metric = l1.metric();
  if (l1.is_infinite() || l2.is_infinite()) return Bound::infinity(metric);
  if (metric == CostMetric::kHeight) {
    return Bound(metric, std::max(l1.value(), l2.value()) + Rational(1));
  }
  const auto a = static_cast<std::int64_t>(n1);
  const auto b = static_cast<std::int64_t>(n2);
  Rational total = Rational(a) * l1.value() + Rational(b) * l2.value();
  return Bound(metric, total / Rational(a + b) + Rational(1));
}

Bound lb1_from_sizes(std::size_t n1, std::size_t n2, CostMetric metric) {
  return combine_split(n1, lb0(n1, metric), n2, lb0(n2, metric));
}

namespace {

std::pair<std::size_t, std::size_t> informative_split(const SubCollection& c, EntityId e) {
  Partition p = partition(c, e);
  if (p.positive.empty() || p.negative.empty()) {
    throw NonInformativeEntityError("entity " + c.collection().entity_label(e) + " does not split the collection");
  }
  return {p.positive.size(), p.negative.size()};
}

}  // namespace

Bound lb1_entity(const SubCollection& c, EntityId e, CostMetric metric) {
  auto [n1, n2] = informative_split(c, e);
  return lb1_from_sizes(n1, n2, metric);
}

Bound lbk_entity(const SubCollection& c, EntityId e, int k, CostMetric metric) {
  if (k < 1) throw std::invalid_argument("lbk_entity: k must be >= 1");
  informative_split(c, e);
  auto [pos, neg] = split(c, e);
  return combine_split(pos.size(), lbk_collection(pos, k - 1, metric), neg.size(),
                       lbk_collection(neg, k - 1, metric));
}

Bound lbk_collection(const SubCollection& c, int k, CostMetric metric) {
  if (c.empty()) throw std::invalid_argument("lbk_collection: empty collection");
  if (k < 0) throw std::invalid_argument("lbk_collection: k must be >= 0");
  if (c.size() == 1) return Bound::zero(metric);
  if (k == 0) return lb0(c.size(), metric);
  std::optional<Bound> best;
  for (EntityId e : informative_entities(c)) {
    Bound b = lbk_entity(c, e, k, metric);
    if (!best || b < *best) best = b;
  }
  // Unique sets always have a splitting entity; duplicates can never be told apart.
  return best ? *best : Bound::infinity(metric);
}

Bound upper_limit_first(const Bound& aflv, std::size_t n1, const Bound& lb0_c2, std::size_t n2, std::size_t n) {
  const CostMetric metric = aflv.metric();
  if (aflv.is_infinite()) return Bound::infinity(metric);
  if (metric == CostMetric::kHeight) return Bound(metric, aflv.value() - Rational(1));
  Rational num = (aflv.value() - Rational(1)) * Rational(static_cast<std::int64_t>(n)) -
                 Rational(static_cast<std::int64_t>(n2)) * lb0_c2.value();
  return Bound(metric, num / Rational(static_cast<std::int64_t>(n1)));
}

Bound upper_limit_second(const Bound& aflv, std::size_t n2, const Bound& lbk1_c1, std::size_t n1, std::size_t n) {
  const CostMetric metric = aflv.metric();
  if (aflv.is_infinite()) return Bound::infinity(metric);
  if (metric == CostMetric::kHeight) return Bound(metric, aflv.value() - Rational(1));
  Rational num = (aflv.value() - Rational(1)) * Rational(static_cast<std::int64_t>(n)) -
                 Rational(static_cast<std::int64_t>(n1)) * lbk1_c1.value();
  return Bound(metric, num / Rational(static_cast<std::int64_t>(n2)));
}

}  // namespace setquest
