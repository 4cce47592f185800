#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lola {

// Half-open byte range into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

inline Span cover(Span a, Span b) { return {a.begin < b.begin ? a.begin : b.begin, a.end > b.end ? a.end : b.end}; }

enum class Severity { Error, Warning };

enum class DiagCode {
  LexicalError,
  UnexpectedToken,
  UnexpectedEnd,
  UnbalancedDelimiter,
  DuplicateStream,
  UnknownStream,
  UnknownFunction,
  ArityMismatch,
  ParamIndexOutOfRange,
  InvalidDeclaration,
  TypeMismatch,
  UnresolvedType,
  DefaultedType,
  PacingMismatch,
  UnderspecifiedPacing,
  LocalSyncViolation,
  SemanticRefinementMismatch,
  ParameterMismatch,
  NonParameterSyncArgument,
  CyclicDependency,
};

std::string_view code_name(DiagCode code);

struct Diagnostic {
  Severity severity = Severity::Error;
  DiagCode code = DiagCode::UnexpectedToken;
  std::string message;
  Span span;
  std::optional<std::string> note;
};

using Diagnostics = std::vector<Diagnostic>;

Diagnostic error(DiagCode code, Span span, std::string message, std::optional<std::string> note = std::nullopt);
Diagnostic warning(DiagCode code, Span span, std::string message, std::optional<std::string> note = std::nullopt);

bool has_errors(const Diagnostics& diagnostics);
void sort_by_position(Diagnostics& diagnostics);

// Maps byte offsets to 1-based line/column pairs for rendering.
class SourceMap {
 public:
  explicit SourceMap(std::string_view source);

  struct Position {
    std::size_t line;
    std::size_t column;
  };
  Position position(std::size_t offset) const;
  std::string render(const Diagnostic& d, std::string_view path) const;

 private:
  std::string_view source_;
  std::vector<std::size_t> line_starts_;
};

}  // namespace lola
