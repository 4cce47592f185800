#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lola/ast.hpp"
#include "lola/dependency.hpp"
#include "lola/pacing.hpp"
#include "lola/semantic.hpp"
#include "lola/value_check.hpp"

namespace lola {

struct PhaseTiming {
  std::string phase;
  double milliseconds = 0;
};

// Result of the full static pipeline. Later phases run only when earlier ones
// produced a specification, so the fields after `spec` may be empty.
struct Analysis {
  std::optional<Specification> spec;
  ValueTyping values;
  PacingInfo pacing;
  std::vector<SemanticTriple> semantics;
  DependencyGraph graph;
  Diagnostics diagnostics;
  std::vector<PhaseTiming> timings;

  bool ok() const { return spec.has_value() && !has_errors(diagnostics); }
};

// parse, desugar, value types, pacing types, semantic types, well-formedness.
Analysis analyze(std::string_view source);

}  // namespace lola
