#include "lola/diagnostic.hpp"

#include <algorithm>

namespace lola {

std::string_view code_name(DiagCode code) {
  switch (code) {
    case DiagCode::LexicalError: return "lexical-error";
    case DiagCode::UnexpectedToken: return "unexpected-token";
    case DiagCode::UnexpectedEnd: return "unexpected-end";
    case DiagCode::UnbalancedDelimiter: return "unbalanced-delimiter";
    case DiagCode::DuplicateStream: return "duplicate-stream";
    case DiagCode::UnknownStream: return "unknown-stream";
    case DiagCode::UnknownFunction: return "unknown-function";
    case DiagCode::ArityMismatch: return "arity-mismatch";
    case DiagCode::ParamIndexOutOfRange: return "param-index-out-of-range";
    case DiagCode::InvalidDeclaration: return "invalid-declaration";
    case DiagCode::TypeMismatch: return "type-mismatch";
    case DiagCode::UnresolvedType: return "unresolved-type";
    case DiagCode::DefaultedType: return "defaulted-type";
    case DiagCode::PacingMismatch: return "pacing-mismatch";
    case DiagCode::UnderspecifiedPacing: return "underspecified-pacing";
    case DiagCode::LocalSyncViolation: return "local-sync-violation";
    case DiagCode::SemanticRefinementMismatch: return "semantic-refinement-mismatch";
    case DiagCode::ParameterMismatch: return "parameter-mismatch";
    case DiagCode::NonParameterSyncArgument: return "non-parameter-sync-argument";
    case DiagCode::CyclicDependency: return "cyclic-dependency";
  }
  return "unknown";
}

Diagnostic error(DiagCode code, Span span, std::string message, std::optional<std::string> note) {
  return Diagnostic{Severity::Error, code, std::move(message), span, std::move(note)};
}

Diagnostic warning(DiagCode code, Span span, std::string message, std::optional<std::string> note) {
  return Diagnostic{Severity::Warning, code, std::move(message), span, std::move(note)};
}

bool has_errors(const Diagnostics& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

void sort_by_position(Diagnostics& diagnostics) {
  std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    return a.span.end < b.span.end;
  });
}

SourceMap::SourceMap(std::string_view source) : source_(source) {
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\n') line_starts_.push_back(i + 1);
  }
}

SourceMap::Position SourceMap::position(std::size_t offset) const {
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
  return {line, offset - line_starts_[line - 1] + 1};
}

std::string SourceMap::render(const Diagnostic& d, std::string_view path) const {
  auto pos = position(d.span.begin);
  std::string out(path);
  out += ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
  out += d.severity == Severity::Error ? "error" : "warning";
  out += "[";
  out += code_name(d.code);
  out += "]: " + d.message + "\n";
  if (d.span.begin < source_.size()) {
    std::size_t line_begin = line_starts_[pos.line - 1];
    std::size_t line_end = source_.find('\n', line_begin);
    if (line_end == std::string_view::npos) line_end = source_.size();
    out += "    ";
    out += source_.substr(line_begin, line_end - line_begin);
    out += "\n    ";
    std::size_t stop = std::min(std::max(d.span.end, d.span.begin + 1), line_end);
    for (std::size_t i = line_begin; i < d.span.begin; ++i) out += source_[i] == '\t' ? '\t' : ' ';
    for (std::size_t i = d.span.begin; i < std::max(stop, d.span.begin + 1); ++i) out += '^';
    out += "\n";
  }
  if (d.note) out += "    note: " + *d.note + "\n";
  return out;
}

}  // namespace lola
