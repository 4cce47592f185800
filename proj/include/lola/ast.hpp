#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lola/activation.hpp"
#include "lola/diagnostic.hpp"
#include "lola/rational.hpp"
#include "lola/surface.hpp"
#include "lola/value.hpp"
#include "lola/value_type.hpp"

namespace lola {

// Inputs occupy ids [0, inputs.size()), outputs follow in declaration order.
struct StreamId {
  std::uint32_t value = 0;
  friend auto operator<=>(const StreamId&, const StreamId&) = default;
};

enum class AggregationFunction { Count, Sum, Avg, Min, Max, Exists, Forall };

enum class Builtin {
  Neg,
  Not,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  Pow,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  Ne,
  And,
  Or,
  Ite,
  Sqrt,
  Abs,
  Sin,
  Cos,
  Tan,
  Arcsin,
  Arccos,
  Arctan,
  Min,
  Max,
  Cast,     // type_args = {from, to}
  Format,   // receiver string followed by the arguments
  Project,  // tuple field `index`
};

std::string_view builtin_name(Builtin b);
std::string_view aggregation_name(AggregationFunction f);

enum class ExprKind { Sync, Hold, Offset, Default, Aggregate, Function, Constant, Parameter, Tuple };

struct Expression {
  ExprKind kind = ExprKind::Constant;
  Span span;
  // Dense per-specification node number, assigned by desugaring.
  std::uint32_t id = 0;

  // Sync, Hold, Offset, Aggregate: accessed stream; `args` are the instance parameters.
  StreamId target;
  // Instance parameters of accesses, function operands, tuple elements, or
  // {inner, fallback} for Default.
  std::vector<Expression> args;
  std::uint32_t offset = 0;
  Rational duration;
  AggregationFunction aggregation = AggregationFunction::Count;
  bool exact_window = false;
  Builtin builtin = Builtin::Add;
  // ParameterAccess index or Project field.
  std::size_t index = 0;
  Value constant;
  // Set for inlined named constants, which carry their declared type.
  std::optional<ValueType> constant_type;
  std::vector<ValueType> type_args;

  bool is_access() const {
    return kind == ExprKind::Sync || kind == ExprKind::Hold || kind == ExprKind::Offset || kind == ExprKind::Aggregate;
  }
  bool is_literal(bool value) const { return kind == ExprKind::Constant && constant.is_bool() && constant.as_bool() == value; }
};

struct PacingAnnotation {
  enum class Kind { Any, Event, GlobalPeriod, LocalPeriod };
  Kind kind = Kind::Any;
  ActivationFormula formula;
  Rational period;
  Span span;

  friend bool operator==(const PacingAnnotation& a, const PacingAnnotation& b) {
    return a.kind == b.kind && a.formula == b.formula && a.period == b.period;
  }
};

struct Declaration {
  PacingAnnotation pacing;
  Expression when;
  // Always present for spawn (a tuple) and eval, absent for close.
  std::optional<Expression> with;
  // False when the clause was filled in with defaults.
  bool written = false;
  Span span;
};

struct InputStream {
  std::string name;
  std::optional<ValueType> type;
  Span span;
};

struct Parameter {
  std::string name;
  std::optional<ValueType> type;
  Span span;
};

struct OutputStream {
  std::string name;
  std::vector<Parameter> params;
  std::optional<ValueType> type;
  Declaration spawn;
  Declaration eval;
  Declaration close;
  bool is_trigger = false;
  Span span;
  Span name_span;

  std::size_t param_count() const { return params.size(); }
  // A stream created by an explicit spawn condition or parameter tuple.
  bool is_spawned() const { return spawn.written; }
  bool closes() const { return !close.when.is_literal(false); }
};

struct Specification {
  std::vector<InputStream> inputs;
  std::vector<OutputStream> outputs;
  std::uint32_t expression_count = 0;

  std::size_t stream_count() const { return inputs.size() + outputs.size(); }
  bool is_input(StreamId s) const { return s.value < inputs.size(); }
  const OutputStream& output(StreamId s) const { return outputs[s.value - inputs.size()]; }
  OutputStream& output(StreamId s) { return outputs[s.value - inputs.size()]; }
  StreamId output_id(std::size_t index) const { return StreamId{static_cast<std::uint32_t>(inputs.size() + index)}; }
  const std::string& name(StreamId s) const;
  std::optional<StreamId> find(std::string_view name) const;
  std::size_t param_count(StreamId s) const { return is_input(s) ? 0 : output(s).param_count(); }
};

struct DesugarResult {
  std::optional<Specification> spec;
  Diagnostics diagnostics;

  bool ok() const { return spec.has_value() && !has_errors(diagnostics); }
};

DesugarResult desugar(const SurfaceSpec& surface);

// One diagnostic per violated arity or parameter-index invariant.
Diagnostics validate_arities(const Specification& spec);

// Renders the core specification back into surface syntax with every clause
// spelled out, so that desugar(to_surface(s)) is structurally equal to s.
SurfaceSpec to_surface(const Specification& spec);

bool structurally_equal(const Expression& a, const Expression& b);
bool structurally_equal(const Specification& a, const Specification& b);

// Span-independent structural key; parameters appear by index. When
// `canonical` is set, operands of && and || are flattened and sorted.
std::string structural_key(const Expression& e, bool canonical = false);

// Human-readable rendering for diagnostics and dumps.
std::string render(const Expression& e, const Specification& spec, const OutputStream* self = nullptr);
std::string render(const PacingAnnotation& p, const Specification& spec);

// Pre-order traversal.
template <typename F>
void visit_expressions(const Expression& e, F&& f) {
  f(e);
  for (const auto& a : e.args) visit_expressions(a, f);
}

}  // namespace lola
