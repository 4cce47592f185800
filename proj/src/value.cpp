#include "lola/value.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>

namespace lola {
namespace {

std::string format_double(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::uint64_t float_key(double d) {
  if (d == 0.0) d = 0.0;
  auto bits = std::bit_cast<std::uint64_t>(d);
  // Map IEEE bit patterns to an unsigned order matching numeric order.
  return (bits & (1ULL << 63)) ? ~bits : bits | (1ULL << 63);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits "a,b,(c,d)" on top-level commas.
std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  bool quoted = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') quoted = !quoted;
    if (quoted) continue;
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(s.substr(start));
  return parts;
}

}  // namespace

double Value::to_double() const {
  if (is_int()) return static_cast<double>(as_int());
  if (is_uint()) return static_cast<double>(as_uint());
  if (is_float()) return as_float();
  return 0.0;
}

std::string Value::to_string() const {
  if (is_bool()) return as_bool() ? "true" : "false";
  if (is_int()) return std::to_string(as_int());
  if (is_uint()) return std::to_string(as_uint());
  if (is_float()) return format_double(as_float());
  if (is_string()) return as_string();
  return tuple_to_string(as_tuple(), '(', ')');
}

bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.data_.index() != b.data_.index()) return a.data_.index() <=> b.data_.index();
  if (a.is_bool()) return a.as_bool() <=> b.as_bool();
  if (a.is_int()) return a.as_int() <=> b.as_int();
  if (a.is_uint()) return a.as_uint() <=> b.as_uint();
  if (a.is_float()) return float_key(a.as_float()) <=> float_key(b.as_float());
  if (a.is_string()) return a.as_string().compare(b.as_string()) <=> 0;
  const Tuple& x = a.as_tuple();
  const Tuple& y = b.as_tuple();
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    auto c = x[i] <=> y[i];
    if (c != 0) return c;
  }
  return x.size() <=> y.size();
}

std::string to_string(const std::optional<Value>& v) { return v ? v->to_string() : "⊥"; }

std::string tuple_to_string(const Tuple& t, char open, char close) {
  std::string out(1, open);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += t[i].to_string();
  }
  out += close;
  return out;
}

std::optional<Value> coerce(const Value& v, const ValueType& type) {
  using K = ValueType::Kind;
  switch (type.kind()) {
    case K::Top:
      return v;
    case K::Bool:
      if (v.is_bool()) return v;
      return std::nullopt;
    case K::String:
      if (v.is_string()) return v;
      return std::nullopt;
    case K::Int: {
      std::int64_t raw;
      if (v.is_int()) {
        raw = v.as_int();
      } else if (v.is_uint()) {
        raw = static_cast<std::int64_t>(v.as_uint());
      } else {
        return std::nullopt;
      }
      switch (type.width()) {
        case 8: raw = static_cast<std::int8_t>(raw); break;
        case 16: raw = static_cast<std::int16_t>(raw); break;
        case 32: raw = static_cast<std::int32_t>(raw); break;
        default: break;
      }
      return Value(raw);
    }
    case K::UInt: {
      std::uint64_t raw;
      if (v.is_uint()) {
        raw = v.as_uint();
      } else if (v.is_int()) {
        raw = static_cast<std::uint64_t>(v.as_int());
      } else {
        return std::nullopt;
      }
      switch (type.width()) {
        case 8: raw = static_cast<std::uint8_t>(raw); break;
        case 16: raw = static_cast<std::uint16_t>(raw); break;
        case 32: raw = static_cast<std::uint32_t>(raw); break;
        default: break;
      }
      return Value(raw);
    }
    case K::Float: {
      if (!v.is_numeric()) return std::nullopt;
      double d = v.to_double();
      if (type.width() == 32) d = static_cast<float>(d);
      return Value(d);
    }
    case K::Option:
      return coerce(v, type.inner());
    case K::Tuple: {
      if (!v.is_tuple() || v.as_tuple().size() != type.elements().size()) return std::nullopt;
      Tuple out;
      for (std::size_t i = 0; i < type.elements().size(); ++i) {
        auto e = coerce(v.as_tuple()[i], type.elements()[i]);
        if (!e) return std::nullopt;
        out.push_back(std::move(*e));
      }
      return Value(std::move(out));
    }
    case K::Bottom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Value> parse_value(std::string_view text, const ValueType& type) {
  using K = ValueType::Kind;
  text = trim(text);
  switch (type.kind()) {
    case K::Bool:
      if (text == "true") return Value(true);
      if (text == "false") return Value(false);
      return std::nullopt;
    case K::String:
      if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
      return Value(std::string(text));
    case K::Int: {
      std::int64_t i = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), i);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
      return coerce(Value(i), type);
    }
    case K::UInt: {
      std::uint64_t u = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), u);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
      return coerce(Value(u), type);
    }
    case K::Float: {
      double d = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), d);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) return std::nullopt;
      return coerce(Value(d), type);
    }
    case K::Tuple: {
      if (text.size() < 2 || text.front() != '(' || text.back() != ')') return std::nullopt;
      std::string_view body = trim(text.substr(1, text.size() - 2));
      Tuple out;
      if (body.empty()) {
        if (!type.elements().empty()) return std::nullopt;
        return Value(std::move(out));
      }
      auto parts = split_top_level(body);
      if (parts.size() != type.elements().size()) return std::nullopt;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        auto e = parse_value(parts[i], type.elements()[i]);
        if (!e) return std::nullopt;
        out.push_back(std::move(*e));
      }
      return Value(std::move(out));
    }
    default:
      return std::nullopt;
  }
}

}  // namespace lola
