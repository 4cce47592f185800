#include "lola/value_type.hpp"

#include <algorithm>

namespace lola {

ValueType ValueType::option(ValueType inner) {
  if (inner.kind_ == Kind::Option) return inner;
  if (inner.kind_ == Kind::Bottom) return inner;
  ValueType t(Kind::Option);
  t.elements_.push_back(std::move(inner));
  return t;
}

ValueType ValueType::tuple(std::vector<ValueType> elements) {
  ValueType t(Kind::Tuple);
  t.elements_ = std::move(elements);
  return t;
}

bool ValueType::contains_option() const {
  if (kind_ == Kind::Option) return true;
  return std::any_of(elements_.begin(), elements_.end(), [](const ValueType& e) { return e.contains_option(); });
}

bool ValueType::contains_top() const {
  if (kind_ == Kind::Top) return true;
  return std::any_of(elements_.begin(), elements_.end(), [](const ValueType& e) { return e.contains_top(); });
}

std::string ValueType::to_string() const {
  switch (kind_) {
    case Kind::Top: return "⊤";
    case Kind::Bottom: return "⊥";
    case Kind::Bool: return "Bool";
    case Kind::String: return "String";
    case Kind::UInt: return "UInt" + std::to_string(width_);
    case Kind::Int: return "Int" + std::to_string(width_);
    case Kind::Float: return "Float" + std::to_string(width_);
    case Kind::Option: return "Option<" + inner().to_string() + ">";
    case Kind::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (i) out += ", ";
        out += elements_[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

bool vt_more_concrete(const ValueType& a, const ValueType& b) {
  using K = ValueType::Kind;
  if (b.kind() == K::Top || a.kind() == K::Bottom) return true;
  if (a.kind() == K::Top || b.kind() == K::Bottom) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::UInt:
    case K::Int:
    case K::Float:
      return a.width() >= b.width();
    case K::Option:
      return vt_more_concrete(a.inner(), b.inner());
    case K::Tuple:
      if (a.elements().size() != b.elements().size()) return false;
      for (std::size_t i = 0; i < a.elements().size(); ++i) {
        if (!vt_more_concrete(a.elements()[i], b.elements()[i])) return false;
      }
      return true;
    default:
      return true;
  }
}

ValueType vt_meet(const ValueType& a, const ValueType& b) {
  using K = ValueType::Kind;
  if (a.kind() == K::Top) return b;
  if (b.kind() == K::Top) return a;
  if (a.kind() == K::Bottom || b.kind() == K::Bottom) return ValueType::bottom();
  if (a.kind() != b.kind()) return ValueType::bottom();
  switch (a.kind()) {
    case K::UInt:
      return ValueType::uint(std::max(a.width(), b.width()));
    case K::Int:
      return ValueType::integer(std::max(a.width(), b.width()));
    case K::Float:
      return ValueType::floating(std::max(a.width(), b.width()));
    case K::Option: {
      ValueType inner = vt_meet(a.inner(), b.inner());
      if (inner.kind() == K::Bottom) return inner;
      return ValueType::option(std::move(inner));
    }
    case K::Tuple: {
      if (a.elements().size() != b.elements().size()) return ValueType::bottom();
      std::vector<ValueType> elements;
      for (std::size_t i = 0; i < a.elements().size(); ++i) {
        ValueType e = vt_meet(a.elements()[i], b.elements()[i]);
        if (e.kind() == K::Bottom) return e;
        elements.push_back(std::move(e));
      }
      return ValueType::tuple(std::move(elements));
    }
    default:
      return a;
  }
}

std::optional<ValueType> primitive_type_from_name(std::string_view name) {
  if (name == "Bool") return ValueType::boolean();
  if (name == "String") return ValueType::string();
  auto sized = [&](std::string_view prefix, auto make, std::initializer_list<int> widths,
                   int fallback) -> std::optional<ValueType> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    std::string_view rest = name.substr(prefix.size());
    if (rest.empty()) return make(fallback);
    for (int w : widths) {
      if (rest == std::to_string(w)) return make(w);
    }
    return std::nullopt;
  };
  if (name.substr(0, 4) == "UInt") return sized("UInt", ValueType::uint, {8, 16, 32, 64}, 64);
  if (name.substr(0, 3) == "Int") return sized("Int", ValueType::integer, {8, 16, 32, 64}, 64);
  if (name.substr(0, 5) == "Float") return sized("Float", ValueType::floating, {32, 64}, 64);
  return std::nullopt;
}

}  // namespace lola
