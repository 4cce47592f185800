#include "lola/rational.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lola {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw std::domain_error("rational with zero denominator");
  Wide n = numerator, d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  Wide g = wide_gcd(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::optional<Rational> Rational::parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  Wide num = 0;
  Wide den = 1;
  bool digits = false;
  constexpr Wide limit = Wide(1) << 100;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    num = num * 10 + (text[i] - '0');
    digits = true;
    if (num > limit) return std::nullopt;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      num = num * 10 + (text[i] - '0');
      den *= 10;
      digits = true;
      if (num > limit || den > limit) {
        // Trailing zeros can still be absorbed.
        if (text[i] != '0') return std::nullopt;
        num /= 10;
        den /= 10;
      }
    }
  }
  if (!digits) return std::nullopt;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg_exp = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      neg_exp = text[i] == '-';
      ++i;
    }
    int exp = 0;
    bool exp_digits = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exp = exp * 10 + (text[i] - '0');
      exp_digits = true;
      if (exp > 30) return std::nullopt;
    }
    if (!exp_digits) return std::nullopt;
    for (int k = 0; k < exp; ++k) {
      if (neg_exp) {
        den *= 10;
      } else {
        num *= 10;
      }
      if (num > limit || den > limit) return std::nullopt;
    }
  }
  if (i != text.size()) return std::nullopt;
  if (negative) num = -num;
  try {
    return make(num, den);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string Rational::to_string() const {
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  int digits = std::max(twos, fives);
  // num / den == num * factor / 10^digits
  Wide factor = 1;
  for (int k = twos; k < digits; ++k) factor *= 2;
  for (int k = fives; k < digits; ++k) factor *= 5;
  Wide scaled = Wide(num_) * factor;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string body;
  if (scaled == 0) body = "0";
  while (scaled > 0) {
    body.insert(body.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  if (digits > 0) {
    while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
    body.insert(body.end() - digits, '.');
  }
  return negative ? "-" + body : body;
}

Rational Rational::operator-() const { return make(-Wide(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide(a.num_) * b.den_;
  Wide rhs = Wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational mod(const Rational& a, const Rational& b) {
  Rational q = a / b;
  return a - b * Rational(q.floor());
}

Rational lcm(const Rational& a, const Rational& b) {
  std::int64_t n = std::lcm(a.num(), b.num());
  std::int64_t d = std::gcd(a.den(), b.den());
  return Rational(n, d);
}

Rational gcd(const Rational& a, const Rational& b) {
  std::int64_t n = std::gcd(a.num(), b.num());
  std::int64_t d = std::lcm(a.den(), b.den());
  return Rational(n, d);
}

bool is_multiple_of(const Rational& a, const Rational& b) {
  if (!a.is_positive() || !b.is_positive()) return false;
  Rational q = a / b;
  return q.is_integer() && q.is_positive();
}

}  // namespace lola
