#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lola/value_type.hpp"

namespace lola {

class Value;
using Tuple = std::vector<Value>;

// A runtime value. The absent value is modelled as an empty std::optional<Value>.
class Value {
 public:
  using Storage = std::variant<bool, std::int64_t, std::uint64_t, double, std::string, Tuple>;

  Value() : data_(Tuple{}) {}
  Value(bool b) : data_(b) {}
  Value(std::int64_t i) : data_(i) {}
  Value(std::uint64_t u) : data_(u) {}
  Value(double d) : data_(d) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(Tuple t) : data_(std::move(t)) {}

  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_uint() const { return std::holds_alternative<std::uint64_t>(data_); }
  bool is_float() const { return std::holds_alternative<double>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_tuple() const { return std::holds_alternative<Tuple>(data_); }
  bool is_numeric() const { return is_int() || is_uint() || is_float(); }

  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  std::uint64_t as_uint() const { return std::get<std::uint64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const Tuple& as_tuple() const { return std::get<Tuple>(data_); }
  // Numeric value widened to double.
  double to_double() const;

  const Storage& storage() const { return data_; }

  // Display form: booleans true/false, floats always carry a decimal point,
  // strings unquoted, tuples as "(a,b)".
  std::string to_string() const;

  // Structural equality and a total order (floats ordered by their bits
  // after normalizing -0.0, so NaN is a regular key).
  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  Storage data_;
};

std::string to_string(const std::optional<Value>& v);
std::string tuple_to_string(const Tuple& t, char open = '[', char close = ']');

// Converts a literal or computed value to the representation of the given
// type (integer width truncation, int to float). Returns nullopt if the value
// does not fit the type's constructor at all.
std::optional<Value> coerce(const Value& v, const ValueType& type);

// Parses the textual form used in traces for the given type.
std::optional<Value> parse_value(std::string_view text, const ValueType& type);

}  // namespace lola
