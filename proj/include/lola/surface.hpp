#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lola/diagnostic.hpp"

namespace lola {

// Concrete syntax as written. Names are unresolved and sugar is preserved.

struct SurfaceType {
  std::string name;                   // empty for tuple types
  std::vector<SurfaceType> elements;  // tuple elements
  Span span;
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Pow, Mul, Div, Mod, Add, Sub, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

struct SurfaceExpr {
  enum class Kind {
    Int,       // text holds the digits
    Float,     // text holds the literal as written
    String,    // text holds the unescaped contents
    Bool,      // text is "true" or "false"
    Quantity,  // duration or frequency literal, text as written ("1s", "200ms")
    Name,      // stream, parameter or constant reference
    Call,      // text(callee) applied to operands; used for stream instances too
    Method,    // operands[0].text(labels[i]: operands[i + 1] ...)
    Field,     // operands[0].index
    Unary,
    Binary,
    If,        // operands: condition, then, else
    Tuple,     // zero or at least two elements
    Cast,      // cast<types[0], types[1]>(operands[0])
  };

  Kind kind = Kind::Int;
  Span span;
  std::string text;
  std::vector<SurfaceExpr> operands;
  std::vector<std::string> labels;  // argument labels for Call and Method, empty string when unlabeled
  std::vector<SurfaceType> types;
  std::size_t index = 0;
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
};

struct SurfaceActivation {
  enum class Kind { Name, True, And, Or };
  Kind kind = Kind::True;
  std::string name;
  std::vector<SurfaceActivation> operands;
  Span span;
};

struct SurfacePacing {
  enum class Kind { Frequency, Global, Local, Activation };
  Kind kind = Kind::Activation;
  std::string quantity;  // as written, for the periodic kinds
  SurfaceActivation activation;
  Span span;
};

struct SurfaceClause {
  std::optional<SurfacePacing> pacing;
  std::optional<SurfaceExpr> when;
  std::optional<SurfaceExpr> with;
  Span span;
};

struct SurfaceParam {
  std::string name;
  std::optional<SurfaceType> type;
  Span span;
};

struct SurfaceImport {
  std::string name;
  Span span;
};

struct SurfaceInput {
  std::string name;
  std::optional<SurfaceType> type;
  Span span;
};

struct SurfaceConstant {
  std::string name;
  SurfaceType type;
  SurfaceExpr value;
  Span span;
};

// Outputs and triggers. Triggers may be anonymous; the expression form
// `trigger e "msg"` is stored as an eval clause with when = e and with = msg.
struct SurfaceStream {
  bool is_trigger = false;
  std::string name;
  Span name_span;
  bool has_param_list = false;
  std::vector<SurfaceParam> params;
  std::optional<SurfaceType> type;
  std::optional<SurfaceClause> spawn;
  std::optional<SurfaceClause> eval;
  std::optional<SurfaceClause> close;
  Span span;
};

using SurfaceDecl = std::variant<SurfaceImport, SurfaceInput, SurfaceConstant, SurfaceStream>;

struct SurfaceSpec {
  std::vector<SurfaceDecl> declarations;
};

// Structural equality ignoring spans.
bool structurally_equal(const SurfaceExpr& a, const SurfaceExpr& b);
bool structurally_equal(const SurfaceSpec& a, const SurfaceSpec& b);

}  // namespace lola
