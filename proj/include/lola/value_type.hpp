#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lola {

// Value types ordered by concreteness: a ⊑ b means a is at least as concrete
// as b. Wider numeric types are more concrete, so Int(64) ⊑ Int(32).
class ValueType {
 public:
  enum class Kind { Top, Bottom, Bool, String, UInt, Int, Float, Option, Tuple };

  ValueType() : kind_(Kind::Top) {}

  static ValueType top() { return ValueType(Kind::Top); }
  static ValueType bottom() { return ValueType(Kind::Bottom); }
  static ValueType boolean() { return ValueType(Kind::Bool); }
  static ValueType string() { return ValueType(Kind::String); }
  static ValueType uint(int width) { return ValueType(Kind::UInt, width); }
  static ValueType integer(int width) { return ValueType(Kind::Int, width); }
  static ValueType floating(int width) { return ValueType(Kind::Float, width); }
  // Option(Option(x)) collapses to Option(x).
  static ValueType option(ValueType inner);
  static ValueType tuple(std::vector<ValueType> elements);
  static ValueType unit() { return tuple({}); }

  Kind kind() const { return kind_; }
  int width() const { return width_; }
  const std::vector<ValueType>& elements() const { return elements_; }
  const ValueType& inner() const { return elements_.front(); }

  bool is_numeric() const { return kind_ == Kind::UInt || kind_ == Kind::Int || kind_ == Kind::Float; }
  bool is_option() const { return kind_ == Kind::Option; }
  // True if an Option occurs anywhere inside this type.
  bool contains_option() const;
  bool contains_top() const;

  std::string to_string() const;

  friend bool operator==(const ValueType&, const ValueType&) = default;

 private:
  explicit ValueType(Kind kind, int width = 0) : kind_(kind), width_(width) {}

  Kind kind_;
  int width_ = 0;
  std::vector<ValueType> elements_;
};

bool vt_more_concrete(const ValueType& a, const ValueType& b);
ValueType vt_meet(const ValueType& a, const ValueType& b);

// Resolves a written type name such as "Int", "UInt8", "Float64" or "Bool".
std::optional<ValueType> primitive_type_from_name(std::string_view name);

}  // namespace lola
