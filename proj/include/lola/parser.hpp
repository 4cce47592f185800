#pragma once

#include <string>
#include <string_view>

#include "lola/diagnostic.hpp"
#include "lola/surface.hpp"

namespace lola {

struct ParseResult {
  SurfaceSpec spec;
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// Total over arbitrary input: malformed text yields error diagnostics, never
// an exception. Recovery resynchronizes at the next declaration keyword.
ParseResult parse(std::string_view source);

// Fully parenthesized clause-form rendering that parses back to a
// structurally equal SurfaceSpec.
std::string roundtrip_print(const SurfaceSpec& spec);
std::string print_expression(const SurfaceExpr& e);

}  // namespace lola
