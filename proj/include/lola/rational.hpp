#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lola {

// Exact rational number with 64-bit numerator and positive denominator,
// always kept in lowest terms. Arithmetic throws std::overflow_error instead
// of silently wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator, std::int64_t denominator = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_positive() const { return num_ > 0; }
  std::int64_t floor() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Accepts "12", "-3", "0.125", "1e-3", "2.5E2". Exact for every finite
  // decimal that fits the representation.
  static std::optional<Rational> parse_decimal(std::string_view text);

  // Terminating decimals print as decimals ("0.5", "60"), others as "n/d".
  std::string to_string() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Euclidean remainder: a - b * floor(a / b), always in [0, b) for b > 0.
Rational mod(const Rational& a, const Rational& b);

// For positive rationals: smallest positive rational that is an integer
// multiple of both, and largest one dividing both.
Rational lcm(const Rational& a, const Rational& b);
Rational gcd(const Rational& a, const Rational& b);

// True iff a / b is a positive integer.
bool is_multiple_of(const Rational& a, const Rational& b);

}  // namespace lola
