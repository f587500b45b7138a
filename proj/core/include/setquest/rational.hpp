#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace setquest {

/// Exact rational number with a normalized 64-bit numerator/denominator.
///
/// Average-depth bounds are always (integer total depth) / (collection size),
/// so every value the cost calculus produces fits comfortably; intermediate
/// products are widened to 128 bits and the result is reduced.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  /// Decimal rendering with `digits` places after the point (rounded half away from zero).
  std::string to_decimal(int digits = 3) const;
  /// "p/q" or "p" when integral.
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace setquest
