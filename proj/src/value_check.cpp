#include "lola/value_check.hpp"

#include <algorithm>
#include <set>

namespace lola {
namespace {

// Inference terms. Unknown is an unconstrained variable; NumLit and FloatLit
// stand for literals whose concrete numeric type is decided by context.
enum class TK { Unknown, NumLit, FloatLit, Bool, String, UInt, Int, Float, Option, Tuple };

struct Term {
  TK kind = TK::Unknown;
  int width = 0;
  std::vector<int> kids;
  int parent = -1;
};

struct Deferred {
  enum class Kind { Project, Numeric, FloatOnly, NotOption } kind;
  int term;
  int result = -1;
  std::size_t index = 0;
  Span span;
};

class Checker {
 public:
  explicit Checker(const Specification& spec) : spec_(spec) {}

  ValueCheckResult run() {
    stream_terms_.resize(spec_.stream_count());
    for (std::size_t i = 0; i < spec_.inputs.size(); ++i) {
      const auto& in = spec_.inputs[i];
      stream_terms_[i] = in.type ? from_type(*in.type) : fresh();
    }
    param_terms_.resize(spec_.outputs.size());
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      const auto& out = spec_.outputs[o];
      stream_terms_[spec_.inputs.size() + o] = out.type ? from_type(*out.type) : fresh();
      for (const auto& p : out.params) param_terms_[o].push_back(p.type ? from_type(*p.type) : fresh());
    }
    expr_terms_.assign(spec_.expression_count, -1);

    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      const auto& out = spec_.outputs[o];
      owner_ = o;
      expect(out.spawn.when, make(TK::Bool));
      const Expression& with = *out.spawn.with;
      int tuple = synth(with);
      (void)tuple;
      for (std::size_t i = 0; i < with.args.size() && i < param_terms_[o].size(); ++i) {
        unify(expr_terms_[with.args[i].id], param_terms_[o][i], with.args[i].span);
      }
      expect(out.eval.when, make(TK::Bool));
      int value = synth(*out.eval.with);
      unify(value, stream_terms_[spec_.inputs.size() + o], out.eval.with->span);
      expect(out.close.when, make(TK::Bool));
    }
    resolve_deferred();
    return finish();
  }

 private:
  int make(TK kind, int width = 0, std::vector<int> kids = {}) {
    Term t;
    t.kind = kind;
    t.width = width;
    t.kids = std::move(kids);
    terms_.push_back(std::move(t));
    return static_cast<int>(terms_.size()) - 1;
  }
  int fresh() { return make(TK::Unknown); }

  int from_type(const ValueType& t) {
    using K = ValueType::Kind;
    switch (t.kind()) {
      case K::Bool: return make(TK::Bool);
      case K::String: return make(TK::String);
      case K::UInt: return make(TK::UInt, t.width());
      case K::Int: return make(TK::Int, t.width());
      case K::Float: return make(TK::Float, t.width());
      case K::Option: return make(TK::Option, 0, {from_type(t.inner())});
      case K::Tuple: {
        std::vector<int> kids;
        for (const auto& e : t.elements()) kids.push_back(from_type(e));
        return make(TK::Tuple, 0, std::move(kids));
      }
      default: return fresh();
    }
  }

  int find(int t) {
    while (terms_[t].parent >= 0) {
      int p = terms_[t].parent;
      if (terms_[p].parent >= 0) terms_[t].parent = terms_[p].parent;
      t = p;
    }
    return t;
  }

  bool occurs(int var, int t) {
    t = find(t);
    if (t == var) return true;
    for (int k : terms_[t].kids) {
      if (occurs(var, k)) return true;
    }
    return false;
  }

  std::string show(int t) {
    t = find(t);
    const Term& x = terms_[t];
    switch (x.kind) {
      case TK::Unknown: return "an unknown type";
      case TK::NumLit: return "a numeric literal";
      case TK::FloatLit: return "a float literal";
      case TK::Bool: return "Bool";
      case TK::String: return "String";
      case TK::UInt: return "UInt" + std::to_string(x.width);
      case TK::Int: return "Int" + std::to_string(x.width);
      case TK::Float: return "Float" + std::to_string(x.width);
      case TK::Option: return "Option<" + show(x.kids[0]) + ">";
      case TK::Tuple: {
        std::string out = "(";
        for (std::size_t i = 0; i < x.kids.size(); ++i) {
          if (i) out += ", ";
          out += show(x.kids[i]);
        }
        return out + ")";
      }
    }
    return "?";
  }

  bool numeric_kind(TK k) { return k == TK::NumLit || k == TK::FloatLit || k == TK::UInt || k == TK::Int || k == TK::Float; }

  bool unify(int a, int b, Span span) {
    if (!unify_quiet(a, b)) {
      if (!reported_.count(span.begin * 1000003 + span.end)) {
        reported_.insert(span.begin * 1000003 + span.end);
        diags_.push_back(error(DiagCode::TypeMismatch, span, "type mismatch: expected " + show(b) + ", found " + show(a)));
      }
      return false;
    }
    return true;
  }

  bool unify_quiet(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    Term& x = terms_[a];
    Term& y = terms_[b];
    if (x.kind == TK::Unknown) {
      if (occurs(a, b)) return false;
      x.parent = b;
      return true;
    }
    if (y.kind == TK::Unknown) return unify_quiet(b, a);
    if (x.kind == TK::NumLit && numeric_kind(y.kind)) {
      x.parent = b;
      return true;
    }
    if (y.kind == TK::NumLit && numeric_kind(x.kind)) return unify_quiet(b, a);
    if (x.kind == TK::FloatLit && (y.kind == TK::Float || y.kind == TK::FloatLit)) {
      x.parent = b;
      return true;
    }
    if (y.kind == TK::FloatLit && x.kind == TK::Float) return unify_quiet(b, a);
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case TK::UInt:
      case TK::Int:
      case TK::Float:
        y.width = std::max(x.width, y.width);
        x.parent = b;
        return true;
      case TK::Option:
      case TK::Tuple: {
        if (x.kids.size() != y.kids.size()) return false;
        std::vector<int> xs = x.kids;
        std::vector<int> ys = y.kids;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (!unify_quiet(xs[i], ys[i])) return false;
        }
        terms_[a].parent = b;
        return true;
      }
      default:
        x.parent = b;
        return true;
    }
  }

  int option_of(int t) {
    int r = find(t);
    if (terms_[r].kind == TK::Option) return r;
    return make(TK::Option, 0, {t});
  }

  void expect(const Expression& e, int type) { unify(synth(e), type, e.span); }

  void require(Deferred::Kind kind, int term, Span span) { deferred_.push_back({kind, term, -1, 0, span}); }

  int access_target(const Expression& e) {
    std::size_t count = spec_.param_count(e.target);
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      int arg = synth(e.args[i]);
      if (i < count) {
        std::size_t out = e.target.value - spec_.inputs.size();
        unify(arg, param_terms_[out][i], e.args[i].span);
      }
    }
    return stream_terms_[e.target.value];
  }

  int synth(const Expression& e) {
    int t = synth_inner(e);
    expr_terms_[e.id] = t;
    return t;
  }

  int synth_inner(const Expression& e) {
    switch (e.kind) {
      case ExprKind::Constant: {
        if (e.constant_type) return from_type(*e.constant_type);
        const Value& v = e.constant;
        if (v.is_bool()) return make(TK::Bool);
        if (v.is_string()) return make(TK::String);
        if (v.is_int()) return make(TK::NumLit);
        if (v.is_uint()) return make(TK::UInt, 64);
        if (v.is_float()) return make(TK::FloatLit);
        return make(TK::Tuple);
      }
      case ExprKind::Parameter:
        if (e.index < param_terms_[owner_].size()) return param_terms_[owner_][e.index];
        return fresh();
      case ExprKind::Sync:
        return access_target(e);
      case ExprKind::Hold:
      case ExprKind::Offset:
        return make(TK::Option, 0, {access_target(e)});
      case ExprKind::Default: {
        int inner = synth(e.args[0]);
        int fallback = synth(e.args[1]);
        int value = fresh();
        if (!unify(inner, make(TK::Option, 0, {value}), e.args[0].span)) return fallback;
        unify(fallback, value, e.args[1].span);
        return value;
      }
      case ExprKind::Aggregate: {
        int target = access_target(e);
        int result = target;
        switch (e.aggregation) {
          case AggregationFunction::Count:
            result = make(TK::UInt, 64);
            break;
          case AggregationFunction::Sum:
            require(Deferred::Kind::Numeric, target, e.span);
            break;
          case AggregationFunction::Avg:
          case AggregationFunction::Min:
          case AggregationFunction::Max:
            require(Deferred::Kind::Numeric, target, e.span);
            result = make(TK::Option, 0, {target});
            break;
          case AggregationFunction::Exists:
          case AggregationFunction::Forall:
            unify(target, make(TK::Bool), e.span);
            result = make(TK::Bool);
            break;
        }
        return e.exact_window ? option_of(result) : result;
      }
      case ExprKind::Tuple: {
        std::vector<int> kids;
        for (const auto& a : e.args) kids.push_back(synth(a));
        return make(TK::Tuple, 0, std::move(kids));
      }
      case ExprKind::Function:
        return function(e);
    }
    return fresh();
  }

  int function(const Expression& e) {
    std::vector<int> args;
    for (const auto& a : e.args) {
      args.push_back(synth(a));
      if (e.builtin != Builtin::Project) require(Deferred::Kind::NotOption, args.back(), a.span);
    }
    auto arity = [&](std::size_t n) {
      if (args.size() == n) return true;
      diags_.push_back(error(DiagCode::ArityMismatch, e.span,
                             "'" + std::string(builtin_name(e.builtin)) + "' expects " + std::to_string(n) +
                                 " argument(s) but got " + std::to_string(args.size())));
      return false;
    };
    switch (e.builtin) {
      case Builtin::Neg:
      case Builtin::Abs:
        if (!arity(1)) return fresh();
        require(Deferred::Kind::Numeric, args[0], e.args[0].span);
        return args[0];
      case Builtin::Not:
        if (!arity(1)) return fresh();
        unify(args[0], make(TK::Bool), e.args[0].span);
        return args[0];
      case Builtin::Add:
      case Builtin::Sub:
      case Builtin::Mul:
      case Builtin::Div:
      case Builtin::Mod:
      case Builtin::Pow:
      case Builtin::Min:
      case Builtin::Max:
        if (!arity(2)) return fresh();
        unify(args[1], args[0], e.args[1].span);
        require(Deferred::Kind::Numeric, args[0], e.span);
        return args[0];
      case Builtin::Lt:
      case Builtin::Le:
      case Builtin::Gt:
      case Builtin::Ge:
        if (!arity(2)) return make(TK::Bool);
        unify(args[1], args[0], e.args[1].span);
        require(Deferred::Kind::Numeric, args[0], e.span);
        return make(TK::Bool);
      case Builtin::Eq:
      case Builtin::Ne:
        if (!arity(2)) return make(TK::Bool);
        unify(args[1], args[0], e.args[1].span);
        return make(TK::Bool);
      case Builtin::And:
      case Builtin::Or:
        if (!arity(2)) return make(TK::Bool);
        unify(args[0], make(TK::Bool), e.args[0].span);
        unify(args[1], make(TK::Bool), e.args[1].span);
        return make(TK::Bool);
      case Builtin::Ite:
        if (!arity(3)) return fresh();
        unify(args[0], make(TK::Bool), e.args[0].span);
        unify(args[2], args[1], e.args[2].span);
        return args[1];
      case Builtin::Sqrt:
      case Builtin::Sin:
      case Builtin::Cos:
      case Builtin::Tan:
      case Builtin::Arcsin:
      case Builtin::Arccos:
      case Builtin::Arctan:
        if (!arity(1)) return fresh();
        unify(args[0], make(TK::FloatLit), e.args[0].span);
        return args[0];
      case Builtin::Cast: {
        if (!arity(1)) return fresh();
        const ValueType& from = e.type_args[0];
        const ValueType& to = e.type_args[1];
        if (!from.is_numeric() || !to.is_numeric()) {
          diags_.push_back(error(DiagCode::TypeMismatch, e.span, "cast is only defined between numeric types"));
        }
        unify(args[0], from_type(from), e.args[0].span);
        return from_type(to);
      }
      case Builtin::Format:
        if (args.empty()) return make(TK::String);
        unify(args[0], make(TK::String), e.args[0].span);
        return make(TK::String);
      case Builtin::Project: {
        if (!arity(1)) return fresh();
        int result = fresh();
        deferred_.push_back({Deferred::Kind::Project, args[0], result, e.index, e.span});
        return result;
      }
    }
    return fresh();
  }

  void resolve_deferred() {
    bool progress = true;
    std::vector<bool> done(deferred_.size(), false);
    while (progress) {
      progress = false;
      for (std::size_t i = 0; i < deferred_.size(); ++i) {
        if (done[i] || deferred_[i].kind != Deferred::Kind::Project) continue;
        const Deferred& d = deferred_[i];
        int t = find(d.term);
        bool optional = false;
        if (terms_[t].kind == TK::Option) {
          optional = true;
          t = find(terms_[t].kids[0]);
        }
        if (terms_[t].kind == TK::Unknown) continue;
        done[i] = true;
        progress = true;
        if (terms_[t].kind != TK::Tuple) {
          diags_.push_back(error(DiagCode::TypeMismatch, d.span, "field access on non-tuple type " + show(d.term)));
          continue;
        }
        if (d.index >= terms_[t].kids.size()) {
          diags_.push_back(error(DiagCode::TypeMismatch, d.span,
                                 "tuple of type " + show(t) + " has no field " + std::to_string(d.index)));
          continue;
        }
        int element = terms_[t].kids[d.index];
        unify(d.result, optional ? make(TK::Option, 0, {element}) : element, d.span);
      }
    }
    for (std::size_t i = 0; i < deferred_.size(); ++i) {
      if (deferred_[i].kind == Deferred::Kind::Project && !done[i]) {
        diags_.push_back(error(DiagCode::UnresolvedType, deferred_[i].span, "cannot infer the tuple type of this field access"));
      }
    }
  }

  // Converts a solved term into a value type, choosing literal defaults.
  // Unknown leaves become Top.
  ValueType resolve(int t) {
    t = find(t);
    const Term& x = terms_[t];
    switch (x.kind) {
      case TK::Unknown: return ValueType::top();
      case TK::NumLit: return ValueType::integer(64);
      case TK::FloatLit: return ValueType::floating(64);
      case TK::Bool: return ValueType::boolean();
      case TK::String: return ValueType::string();
      case TK::UInt: return ValueType::uint(x.width);
      case TK::Int: return ValueType::integer(x.width);
      case TK::Float: return ValueType::floating(x.width);
      case TK::Option: return ValueType::option(resolve(x.kids[0]));
      case TK::Tuple: {
        std::vector<ValueType> elements;
        for (int k : x.kids) elements.push_back(resolve(k));
        return ValueType::tuple(std::move(elements));
      }
    }
    return ValueType::top();
  }

  ValueCheckResult finish() {
    // Untyped inputs nobody constrains default to Int64.
    for (std::size_t i = 0; i < spec_.inputs.size(); ++i) {
      if (spec_.inputs[i].type) continue;
      int t = find(stream_terms_[i]);
      if (terms_[t].kind == TK::Unknown || terms_[t].kind == TK::NumLit) {
        diags_.push_back(warning(DiagCode::DefaultedType, spec_.inputs[i].span,
                                 "type of input '" + spec_.inputs[i].name + "' defaults to Int64"));
        unify_quiet(t, make(TK::Int, 64));
      }
    }
    for (const auto& d : deferred_) {
      int t = find(d.term);
      if (d.kind == Deferred::Kind::Numeric && !numeric_kind(terms_[t].kind) && terms_[t].kind != TK::Unknown) {
        diags_.push_back(error(DiagCode::TypeMismatch, d.span, "expected a numeric type, found " + show(t)));
      }
      if (d.kind == Deferred::Kind::NotOption && terms_[t].kind == TK::Option) {
        diags_.push_back(error(DiagCode::TypeMismatch, d.span,
                               "optional value of type " + show(t) + " must be resolved with a default first"));
      }
    }

    ValueCheckResult result;
    ValueTyping& typing = result.typing;
    for (std::size_t s = 0; s < stream_terms_.size(); ++s) {
      ValueType t = resolve(stream_terms_[s]);
      StreamId id{static_cast<std::uint32_t>(s)};
      Span span = spec_.is_input(id) ? spec_.inputs[s].span : spec_.output(id).name_span;
      const std::string& name = spec_.name(id);
      const std::optional<ValueType>& declared = spec_.is_input(id) ? spec_.inputs[s].type : spec_.output(id).type;
      if (t.contains_top()) {
        diags_.push_back(error(DiagCode::UnresolvedType, span, "cannot infer the type of '" + name + "'"));
      } else if (t.contains_option()) {
        diags_.push_back(error(DiagCode::TypeMismatch, span,
                               "stream '" + name + "' would have optional type " + t.to_string() +
                                   "; supply a default value"));
      } else if (declared && !(*declared == t)) {
        diags_.push_back(error(DiagCode::TypeMismatch, span,
                               "'" + name + "' is declared as " + declared->to_string() + " but its values have type " +
                                   t.to_string()));
      }
      if (!spec_.is_input(id) && spec_.output(id).is_trigger && t.kind() != ValueType::Kind::String &&
          t.kind() != ValueType::Kind::Bool && !t.contains_top()) {
        diags_.push_back(error(DiagCode::TypeMismatch, spec_.output(id).eval.with->span,
                               "trigger message must be a String or Bool, found " + t.to_string()));
      }
      typing.streams.push_back(std::move(t));
    }
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      typing.params.emplace_back();
      for (std::size_t p = 0; p < param_terms_[o].size(); ++p) {
        ValueType t = resolve(param_terms_[o][p]);
        const Parameter& param = spec_.outputs[o].params[p];
        if (t.contains_top()) {
          diags_.push_back(error(DiagCode::UnresolvedType, param.span, "cannot infer the type of parameter '" + param.name + "'"));
        } else if (t.contains_option()) {
          diags_.push_back(error(DiagCode::TypeMismatch, param.span, "parameter '" + param.name + "' cannot be optional"));
        } else if (param.type && !(*param.type == t)) {
          diags_.push_back(error(DiagCode::TypeMismatch, param.span,
                                 "parameter '" + param.name + "' is declared as " + param.type->to_string() +
                                     " but receives " + t.to_string()));
        }
        typing.params.back().push_back(std::move(t));
      }
    }
    for (int t : expr_terms_) typing.expressions.push_back(t < 0 ? ValueType::top() : resolve(t));
    sort_by_position(diags_);
    result.diagnostics = std::move(diags_);
    return result;
  }

  const Specification& spec_;
  std::vector<Term> terms_;
  std::vector<int> stream_terms_;
  std::vector<std::vector<int>> param_terms_;
  std::vector<int> expr_terms_;
  std::vector<Deferred> deferred_;
  std::set<std::size_t> reported_;
  Diagnostics diags_;
  std::size_t owner_ = 0;
};

}  // namespace

ValueCheckResult check_value_types(const Specification& spec) { return Checker(spec).run(); }

}  // namespace lola
