#pragma once

#include <vector>

#include "lola/ast.hpp"

namespace lola {

struct ValueTyping {
  // Indexed by StreamId::value.
  std::vector<ValueType> streams;
  // Indexed by output position, then parameter position.
  std::vector<std::vector<ValueType>> params;
  // Indexed by Expression::id.
  std::vector<ValueType> expressions;
};

struct ValueCheckResult {
  ValueTyping typing;
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Infers the value types of all streams, parameters and expressions.
// Untyped integer literals default to Int64 and float literals to Float64;
// an input whose type is never constrained defaults to Int64 with a warning.
ValueCheckResult check_value_types(const Specification& spec);

}  // namespace lola
