#include "lola/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace lola {
namespace {

using Opt = std::optional<Value>;

int width_of(const ValueType& t) { return t.is_numeric() && t.width() > 0 ? t.width() : 64; }
bool is_float32(const ValueType& t) { return t.kind() == ValueType::Kind::Float && t.width() == 32; }

std::int64_t wrap_int(std::uint64_t u, int width) {
  if (width >= 64) return static_cast<std::int64_t>(u);
  std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  u &= mask;
  if (u >> (width - 1)) u |= ~mask;
  return static_cast<std::int64_t>(u);
}

std::uint64_t wrap_uint(std::uint64_t u, int width) {
  if (width >= 64) return u;
  return u & ((std::uint64_t{1} << width) - 1);
}

double round_float(double d, const ValueType& t) { return is_float32(t) ? static_cast<double>(static_cast<float>(d)) : d; }

std::partial_ordering compare(const Value& a, const Value& b) {
  if (a.is_float() || b.is_float()) return a.to_double() <=> b.to_double();
  if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
  if (a.is_uint() && b.is_uint()) return a.as_uint() <=> b.as_uint();
  if (a.is_int() && b.is_uint()) {
    return a.as_int() < 0 ? std::partial_ordering::less : static_cast<std::uint64_t>(a.as_int()) <=> b.as_uint();
  }
  if (a.is_uint() && b.is_int()) {
    return b.as_int() < 0 ? std::partial_ordering::greater : a.as_uint() <=> static_cast<std::uint64_t>(b.as_int());
  }
  if (a.is_string() && b.is_string()) return a.as_string() <=> b.as_string();
  if (a.is_bool() && b.is_bool()) return a.as_bool() <=> b.as_bool();
  return std::partial_ordering::unordered;
}

bool equal(const Value& a, const Value& b) {
  if (a.is_float() && b.is_float()) return a.as_float() == b.as_float();
  if (a.is_tuple() && b.is_tuple()) {
    const Tuple& x = a.as_tuple();
    const Tuple& y = b.as_tuple();
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!equal(x[i], y[i])) return false;
    }
    return true;
  }
  if (a.is_numeric() && b.is_numeric()) return compare(a, b) == std::partial_ordering::equivalent;
  return a == b;
}

std::uint64_t bits(const Value& v) {
  return v.is_int() ? static_cast<std::uint64_t>(v.as_int()) : v.is_uint() ? v.as_uint() : 0;
}

std::uint64_t int_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

Value cast_value(const Value& v, const ValueType& to) {
  const int w = width_of(to);
  switch (to.kind()) {
    case ValueType::Kind::Float:
      return round_float(v.to_double(), to);
    case ValueType::Kind::Int: {
      if (!v.is_float()) return wrap_int(bits(v), w);
      double d = std::trunc(v.as_float());
      if (std::isnan(d)) return std::int64_t{0};
      double hi = std::ldexp(1.0, w - 1);
      if (d >= hi) return w >= 64 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(hi) - 1;
      if (d < -hi) return w >= 64 ? std::numeric_limits<std::int64_t>::min() : -static_cast<std::int64_t>(hi);
      return static_cast<std::int64_t>(d);
    }
    case ValueType::Kind::UInt: {
      if (!v.is_float()) return wrap_uint(bits(v), w);
      double d = std::trunc(v.as_float());
      if (std::isnan(d) || d <= 0) return std::uint64_t{0};
      double hi = std::ldexp(1.0, w);
      if (d >= hi) return w >= 64 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(hi) - 1;
      return static_cast<std::uint64_t>(d);
    }
    default:
      return v;
  }
}

std::string format(const std::vector<Value>& args) {
  const std::string& pattern = args.front().as_string();
  std::string out;
  std::size_t next = 1;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    char c = pattern[i];
    bool has_next = i + 1 < pattern.size();
    if (c == '{' && has_next && pattern[i + 1] == '{') {
      out += '{';
      ++i;
    } else if (c == '}' && has_next && pattern[i + 1] == '}') {
      out += '}';
      ++i;
    } else if (c == '{' && has_next && pattern[i + 1] == '}' && next < args.size()) {
      out += args[next++].to_string();
      ++i;
    } else {
      out += c;
    }
  }
  return out;
}

struct Instance {
  Tuple params;
  Rational spawn_time;
  std::deque<std::pair<Rational, Value>> prefix;
  bool fires = false;
  bool computed = false;
};

struct StreamState {
  std::map<Tuple, Instance> instances;
  std::size_t keep = 1;
  std::optional<Rational> window;
};

enum class Stage { Spawn = 0, When = 1, With = 2 };

}  // namespace

std::string_view monitor_error_name(MonitorErrorKind kind) {
  switch (kind) {
    case MonitorErrorKind::SyncAccessFailure: return "SyncAccessFailure";
    case MonitorErrorKind::NonMonotoneTrace: return "NonMonotoneTrace";
    case MonitorErrorKind::UnknownInput: return "UnknownInput";
    case MonitorErrorKind::DivisionByZero: return "DivisionByZero";
    case MonitorErrorKind::CyclicSchedule: return "CyclicSchedule";
  }
  return "?";
}

bool eval_pacing(const PacingType& p, const Rational& now, const Rational& spawn_time,
                 const std::function<bool(std::uint32_t)>& fresh) {
  switch (p.kind()) {
    case PacingType::Kind::Top: return true;
    case PacingType::Kind::Periodic:
    case PacingType::Kind::Bottom: return false;
    case PacingType::Kind::Event: return p.formula().holds(fresh);
    case PacingType::Kind::Global: return mod(now, p.period()).is_zero();
    case PacingType::Kind::Local: return now > spawn_time && mod(now - spawn_time, p.period()).is_zero();
  }
  return false;
}

struct Monitor::Impl {
  const Specification& spec;
  const ValueTyping& types;
  const PacingInfo& pacing;
  MonitorOptions options;

  std::vector<StreamState> streams;
  std::vector<std::pair<std::uint32_t, Stage>> order;
  std::vector<Rational> global_periods;
  std::vector<std::pair<std::uint32_t, Rational>> local_periods;
  std::vector<Opt> constants;
  std::vector<bool> fresh;

  Rational now;
  std::optional<Rational> last;
  std::vector<ReportRow> step_verdicts;
  std::vector<ReportRow> step_dump;
  MonitorReport report;

  Impl(const Specification& s, const ValueTyping& t, const PacingInfo& p, MonitorOptions o)
      : spec(s), types(t), pacing(p), options(o), streams(s.stream_count()), constants(s.expression_count) {
    for (std::uint32_t i = 0; i < spec.stream_count(); ++i) report.stream_names.push_back(spec.name(StreamId{i}));
    for (std::uint32_t i = 0; i < spec.inputs.size(); ++i) streams[i].instances.emplace(Tuple{}, Instance{});
    for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
      if (!spec.outputs[o].is_spawned()) streams[spec.output_id(o).value].instances.emplace(Tuple{}, Instance{});
    }
    collect_periods();
    collect_retention();
    schedule();
  }

  const StreamPacing& stream_pacing(std::uint32_t id) const { return pacing.streams[id]; }

  void collect_periods() {
    std::set<Rational> global;
    std::set<std::pair<std::uint32_t, Rational>> local;
    for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
      std::uint32_t id = spec.output_id(o).value;
      if (id >= pacing.streams.size()) continue;
      const StreamPacing& sp = pacing.streams[id];
      for (const PacingType* p : {&sp.spawn, &sp.eval, &sp.close}) {
        if (p->kind() == PacingType::Kind::Global) global.insert(p->period());
        if (p->kind() == PacingType::Kind::Local) local.insert({id, p->period()});
      }
    }
    global_periods.assign(global.begin(), global.end());
    local_periods.assign(local.begin(), local.end());
  }

  void collect_retention() {
    auto note = [&](const Expression& e) {
      if (!e.is_access()) return;
      StreamState& st = streams[e.target.value];
      if (e.kind == ExprKind::Offset) st.keep = std::max<std::size_t>(st.keep, e.offset + 1);
      if (e.kind == ExprKind::Aggregate && (!st.window || *st.window < e.duration)) st.window = e.duration;
    };
    for (const auto& out : spec.outputs) {
      visit_expressions(out.spawn.when, note);
      visit_expressions(*out.spawn.with, note);
      visit_expressions(out.eval.when, note);
      visit_expressions(*out.eval.with, note);
      visit_expressions(out.close.when, note);
    }
  }

  // Topological order over (output, stage) nodes.
  void schedule() {
    const std::size_t n = spec.outputs.size() * 3;
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    auto edge = [&](std::size_t from, std::size_t to) {
      succ[from].push_back(to);
      ++indegree[to];
    };
    for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
      edge(3 * o, 3 * o + 1);
      edge(3 * o + 1, 3 * o + 2);
      const OutputStream& out = spec.outputs[o];
      auto deps = [&](const Expression& root, std::size_t node) {
        visit_expressions(root, [&](const Expression& e) {
          if (!e.is_access() || spec.is_input(e.target)) return;
          std::size_t t = e.target.value - spec.inputs.size();
          edge(3 * t + (e.kind == ExprKind::Offset ? 1 : 2), node);
        });
      };
      deps(out.spawn.when, 3 * o);
      deps(*out.spawn.with, 3 * o);
      deps(out.eval.when, 3 * o + 1);
      deps(*out.eval.with, 3 * o + 2);
    }
    auto cmp = [&](std::size_t a, std::size_t b) { return options.tie_break == TieBreak::Forward ? a > b : a < b; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
      std::size_t v = ready.top();
      ready.pop();
      order.emplace_back(spec.output_id(v / 3).value, static_cast<Stage>(v % 3));
      for (std::size_t w : succ[v]) {
        if (--indegree[w] == 0) ready.push(w);
      }
    }
    if (order.size() != n) {
      throw MonitorError(MonitorErrorKind::CyclicSchedule, Rational(0), Span{},
                         "the declarations cannot be ordered because they depend on each other without delay");
    }
  }

  [[noreturn]] void fail(MonitorErrorKind kind, Span span, const std::string& message) const {
    throw MonitorError(kind, now, span, message + " at time " + now.to_string());
  }

  const ValueType& type_of(const Expression& e) const {
    static const ValueType top;
    return e.id < types.expressions.size() ? types.expressions[e.id] : top;
  }

  Instance* lookup(const Expression& access, const Tuple& self) {
    Tuple key;
    key.reserve(access.args.size());
    for (const auto& a : access.args) {
      Opt v = eval(a, self);
      if (!v) return nullptr;
      key.push_back(std::move(*v));
    }
    auto& instances = streams[access.target.value].instances;
    auto it = instances.find(key);
    return it == instances.end() ? nullptr : &it->second;
  }

  Opt eval(const Expression& e, const Tuple& self) {
    switch (e.kind) {
      case ExprKind::Constant: {
        Opt& cached = constants[e.id];
        if (!cached) {
          const ValueType& t = type_of(e);
          Opt c = t.contains_top() ? std::nullopt : coerce(e.constant, t);
          cached = c ? *c : e.constant;
        }
        return cached;
      }
      case ExprKind::Parameter:
        if (e.index < self.size()) return self[e.index];
        return std::nullopt;
      case ExprKind::Tuple: {
        Tuple t;
        for (const auto& a : e.args) {
          Opt v = eval(a, self);
          if (!v) return std::nullopt;
          t.push_back(std::move(*v));
        }
        return Value(std::move(t));
      }
      case ExprKind::Default: {
        Opt v = eval(e.args[0], self);
        return v ? v : eval(e.args[1], self);
      }
      case ExprKind::Sync: {
        Instance* inst = lookup(e, self);
        if (!inst) return std::nullopt;
        if (!inst->computed) {
          fail(MonitorErrorKind::SyncAccessFailure, e.span,
               "synchronous access to " + spec.name(e.target) + tuple_to_string(inst->params) + " found no value");
        }
        return inst->prefix.back().second;
      }
      case ExprKind::Hold: {
        Instance* inst = lookup(e, self);
        if (!inst || inst->prefix.empty()) return std::nullopt;
        return inst->prefix.back().second;
      }
      case ExprKind::Offset: {
        Instance* inst = lookup(e, self);
        if (!inst) return std::nullopt;
        std::int64_t len = static_cast<std::int64_t>(inst->prefix.size());
        std::int64_t index = (inst->fires && !inst->computed) ? len - e.offset : len - 1 - e.offset;
        if (index < 0 || index >= len) return std::nullopt;
        return inst->prefix[static_cast<std::size_t>(index)].second;
      }
      case ExprKind::Aggregate:
        return aggregate(e, self);
      case ExprKind::Function:
        return function(e, self);
    }
    return std::nullopt;
  }

  Opt aggregate(const Expression& e, const Tuple& self) {
    Instance* inst = lookup(e, self);
    Rational lower = now - e.duration;
    if (e.exact_window && (!inst || lower < inst->spawn_time)) return std::nullopt;
    std::vector<const Value*> window;
    if (inst) {
      for (auto it = inst->prefix.rbegin(); it != inst->prefix.rend() && it->first > lower; ++it) {
        window.push_back(&it->second);
      }
      std::reverse(window.begin(), window.end());
    }
    const ValueType& t = e.target.value < types.streams.size() ? types.streams[e.target.value] : type_of(e);
    auto zero = [&]() -> Value {
      if (t.kind() == ValueType::Kind::Float) return 0.0;
      if (t.kind() == ValueType::Kind::UInt) return std::uint64_t{0};
      return std::int64_t{0};
    };
    auto sum = [&]() {
      Value acc = window.empty() ? zero() : *window.front();
      for (std::size_t i = 1; i < window.size(); ++i) acc = arith(Builtin::Add, acc, *window[i], t, e.span);
      return acc;
    };
    switch (e.aggregation) {
      case AggregationFunction::Count:
        return Value(static_cast<std::uint64_t>(window.size()));
      case AggregationFunction::Sum:
        return sum();
      case AggregationFunction::Avg: {
        if (window.empty()) return std::nullopt;
        Value total = sum();
        if (total.is_float()) return Value(round_float(total.as_float() / static_cast<double>(window.size()), t));
        if (total.is_uint()) return Value(total.as_uint() / window.size());
        return Value(total.as_int() / static_cast<std::int64_t>(window.size()));
      }
      case AggregationFunction::Min:
      case AggregationFunction::Max: {
        if (window.empty()) return std::nullopt;
        const Value* best = window.front();
        for (const Value* v : window) {
          auto c = compare(*v, *best);
          if (e.aggregation == AggregationFunction::Min ? c < 0 : c > 0) best = v;
        }
        return *best;
      }
      case AggregationFunction::Exists:
        return Value(std::any_of(window.begin(), window.end(), [](const Value* v) { return v->as_bool(); }));
      case AggregationFunction::Forall:
        return Value(std::all_of(window.begin(), window.end(), [](const Value* v) { return v->as_bool(); }));
    }
    return std::nullopt;
  }

  Value arith(Builtin op, const Value& a, const Value& b, const ValueType& t, Span span) const {
    if (a.is_float() || b.is_float()) {
      double x = a.to_double();
      double y = b.to_double();
      double r = 0;
      switch (op) {
        case Builtin::Add: r = x + y; break;
        case Builtin::Sub: r = x - y; break;
        case Builtin::Mul: r = x * y; break;
        case Builtin::Div: r = x / y; break;
        case Builtin::Mod: r = std::fmod(x, y); break;
        case Builtin::Pow: r = std::pow(x, y); break;
        default: break;
      }
      return round_float(r, t);
    }
    const int w = width_of(t);
    const bool is_signed = a.is_int();
    std::uint64_t x = bits(a);
    std::uint64_t y = bits(b);
    auto result = [&](std::uint64_t u) { return is_signed ? Value(wrap_int(u, w)) : Value(wrap_uint(u, w)); };
    switch (op) {
      case Builtin::Add: return result(x + y);
      case Builtin::Sub: return result(x - y);
      case Builtin::Mul: return result(x * y);
      case Builtin::Div:
      case Builtin::Mod: {
        if (y == 0) fail(MonitorErrorKind::DivisionByZero, span, "division by zero");
        if (!is_signed) return result(op == Builtin::Div ? x / y : x % y);
        std::int64_t sx = a.as_int();
        std::int64_t sy = b.as_int();
        if (sy == -1) return op == Builtin::Div ? result(0 - x) : result(0);
        return result(static_cast<std::uint64_t>(op == Builtin::Div ? sx / sy : sx % sy));
      }
      case Builtin::Pow: {
        if (is_signed && b.as_int() < 0) {
          std::int64_t base = a.as_int();
          if (base == 1) return result(1);
          if (base == -1) return result((b.as_int() & 1) ? static_cast<std::uint64_t>(-1) : 1);
          if (base == 0) fail(MonitorErrorKind::DivisionByZero, span, "zero raised to a negative power");
          return result(0);
        }
        return result(int_pow(x, y));
      }
      default: return result(0);
    }
  }

  Opt function(const Expression& e, const Tuple& self) {
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) {
      Opt v = eval(a, self);
      if (!v) return std::nullopt;
      args.push_back(std::move(*v));
    }
    const ValueType& t = type_of(e);
    switch (e.builtin) {
      case Builtin::Neg:
        if (args[0].is_float()) return Value(-args[0].as_float());
        return arith(Builtin::Sub, args[0].is_int() ? Value(std::int64_t{0}) : Value(std::uint64_t{0}), args[0], t, e.span);
      case Builtin::Not: return Value(!args[0].as_bool());
      case Builtin::Add:
      case Builtin::Sub:
      case Builtin::Mul:
      case Builtin::Div:
      case Builtin::Mod:
      case Builtin::Pow: return arith(e.builtin, args[0], args[1], t, e.span);
      case Builtin::Lt: return Value(compare(args[0], args[1]) < 0);
      case Builtin::Le: return Value(compare(args[0], args[1]) <= 0);
      case Builtin::Gt: return Value(compare(args[0], args[1]) > 0);
      case Builtin::Ge: return Value(compare(args[0], args[1]) >= 0);
      case Builtin::Eq: return Value(equal(args[0], args[1]));
      case Builtin::Ne: return Value(!equal(args[0], args[1]));
      case Builtin::And: return Value(args[0].as_bool() && args[1].as_bool());
      case Builtin::Or: return Value(args[0].as_bool() || args[1].as_bool());
      case Builtin::Ite: return args[0].as_bool() ? args[1] : args[2];
      case Builtin::Sqrt: return Value(round_float(std::sqrt(args[0].to_double()), t));
      case Builtin::Sin: return Value(round_float(std::sin(args[0].to_double()), t));
      case Builtin::Cos: return Value(round_float(std::cos(args[0].to_double()), t));
      case Builtin::Tan: return Value(round_float(std::tan(args[0].to_double()), t));
      case Builtin::Arcsin: return Value(round_float(std::asin(args[0].to_double()), t));
      case Builtin::Arccos: return Value(round_float(std::acos(args[0].to_double()), t));
      case Builtin::Arctan: return Value(round_float(std::atan(args[0].to_double()), t));
      case Builtin::Abs:
        if (args[0].is_float()) return Value(std::fabs(args[0].as_float()));
        if (args[0].is_int() && args[0].as_int() < 0) {
          return arith(Builtin::Sub, Value(std::int64_t{0}), args[0], t, e.span);
        }
        return args[0];
      case Builtin::Min: return compare(args[1], args[0]) < 0 ? args[1] : args[0];
      case Builtin::Max: return compare(args[1], args[0]) > 0 ? args[1] : args[0];
      case Builtin::Cast: return cast_value(args[0], e.type_args.size() > 1 ? e.type_args[1] : t);
      case Builtin::Format: return Value(format(args));
      case Builtin::Project: {
        const Tuple& tuple = args[0].as_tuple();
        if (e.index >= tuple.size()) return std::nullopt;
        return tuple[e.index];
      }
    }
    return std::nullopt;
  }

  bool fresh_input(std::uint32_t i) const { return i < fresh.size() && fresh[i]; }

  bool due(const PacingType& p, const Rational& spawn_time) const {
    return eval_pacing(p, now, spawn_time, [this](std::uint32_t i) { return fresh_input(i); });
  }

  bool holds(const Expression& cond, const Tuple& self) {
    if (cond.is_literal(true)) return true;
    Opt v = eval(cond, self);
    if (!v) fail(MonitorErrorKind::SyncAccessFailure, cond.span, "condition has no value");
    return v->as_bool();
  }

  void spawn(std::uint32_t id) {
    const OutputStream& out = spec.output(StreamId{id});
    if (!out.is_spawned() || !due(stream_pacing(id).spawn, Rational(0))) return;
    static const Tuple none;
    if (!holds(out.spawn.when, none)) return;
    Opt params = eval(*out.spawn.with, none);
    if (!params) fail(MonitorErrorKind::SyncAccessFailure, out.spawn.with->span, "spawn parameters have no value");
    Tuple key = params->as_tuple();
    auto& instances = streams[id].instances;
    if (instances.find(key) != instances.end()) return;
    Instance inst;
    inst.params = key;
    inst.spawn_time = now;
    instances.emplace(std::move(key), std::move(inst));
  }

  void decide(std::uint32_t id) {
    const OutputStream& out = spec.output(StreamId{id});
    for (auto& [params, inst] : streams[id].instances) {
      inst.fires = due(stream_pacing(id).eval, inst.spawn_time) && holds(out.eval.when, params);
    }
  }

  void compute(std::uint32_t id) {
    const OutputStream& out = spec.output(StreamId{id});
    for (auto& [params, inst] : streams[id].instances) {
      if (!inst.fires) continue;
      Opt v = eval(*out.eval.with, params);
      if (!v) fail(MonitorErrorKind::SyncAccessFailure, out.eval.with->span, "stream expression has no value");
      inst.prefix.emplace_back(now, *v);
      inst.computed = true;
      if (out.is_trigger) step_verdicts.push_back({now, StreamId{id}, params, *v});
      if (options.dump) step_dump.push_back({now, StreamId{id}, params, std::move(*v)});
    }
  }

  void close() {
    std::vector<std::pair<std::uint32_t, Tuple>> doomed;
    for (std::size_t o = 0; o < spec.outputs.size(); ++o) {
      const OutputStream& out = spec.outputs[o];
      if (!out.closes()) continue;
      std::uint32_t id = spec.output_id(o).value;
      for (auto& [params, inst] : streams[id].instances) {
        if (due(stream_pacing(id).close, inst.spawn_time) && holds(out.close.when, params)) {
          doomed.emplace_back(id, params);
        }
      }
    }
    for (auto& [id, params] : doomed) streams[id].instances.erase(params);
  }

  void prune() {
    for (auto& st : streams) {
      for (auto& [params, inst] : st.instances) {
        while (inst.prefix.size() > st.keep && (!st.window || inst.prefix.front().first <= now - *st.window)) {
          inst.prefix.pop_front();
        }
      }
    }
  }

  void step(const Rational& t, const std::vector<std::pair<std::uint32_t, Value>>& inputs) {
    if (last && t <= *last) {
      throw MonitorError(MonitorErrorKind::NonMonotoneTrace, t, Span{},
                         "time " + t.to_string() + " does not follow " + last->to_string());
    }
    now = t;
    for (auto& st : streams) {
      for (auto& [params, inst] : st.instances) inst.fires = inst.computed = false;
    }
    fresh.assign(spec.inputs.size(), false);
    for (const auto& [id, value] : inputs) {
      if (id >= spec.inputs.size()) {
        throw MonitorError(MonitorErrorKind::UnknownInput, t, Span{}, "unknown input id " + std::to_string(id));
      }
      Instance& inst = streams[id].instances.begin()->second;
      if (fresh[id]) inst.prefix.pop_back();
      inst.prefix.emplace_back(t, value);
      inst.fires = inst.computed = true;
      fresh[id] = true;
    }
    for (const auto& [id, stage] : order) {
      switch (stage) {
        case Stage::Spawn: spawn(id); break;
        case Stage::When: decide(id); break;
        case Stage::With: compute(id); break;
      }
    }
    close();
    prune();
    auto by_stream = [](const ReportRow& a, const ReportRow& b) {
      return std::tie(a.stream, a.params) < std::tie(b.stream, b.params);
    };
    std::sort(step_verdicts.begin(), step_verdicts.end(), by_stream);
    std::sort(step_dump.begin(), step_dump.end(), by_stream);
    report.verdicts.insert(report.verdicts.end(), step_verdicts.begin(), step_verdicts.end());
    report.dump.insert(report.dump.end(), step_dump.begin(), step_dump.end());
    step_verdicts.clear();
    step_dump.clear();
    last = t;
  }

  // Smallest k * period + base that is strictly greater than `after`.
  static Rational next_multiple(const Rational& base, const Rational& period, const Rational& after) {
    Rational k((after - base) / period);
    return base + period * Rational(k.floor() + 1);
  }

  std::optional<Rational> next_deadline(const std::optional<Rational>& after) const {
    std::optional<Rational> best;
    auto offer = [&](const Rational& t) {
      if (!best || t < *best) best = t;
    };
    for (const Rational& p : global_periods) offer(after ? next_multiple(Rational(0), p, *after) : Rational(0));
    for (const auto& [id, p] : local_periods) {
      for (const auto& [params, inst] : streams[id].instances) {
        Rational from = after && *after > inst.spawn_time ? *after : inst.spawn_time;
        offer(next_multiple(inst.spawn_time, p, from));
      }
    }
    return best;
  }
};

Monitor::Monitor(const Specification& spec, const ValueTyping& types, const PacingInfo& pacing, MonitorOptions options)
    : impl_(std::make_unique<Impl>(spec, types, pacing, options)) {}
Monitor::~Monitor() = default;
Monitor::Monitor(Monitor&&) noexcept = default;
Monitor& Monitor::operator=(Monitor&&) noexcept = default;

void Monitor::step(const Rational& now, const std::vector<std::pair<std::uint32_t, Value>>& inputs) {
  impl_->step(now, inputs);
}

std::optional<Rational> Monitor::next_deadline(const std::optional<Rational>& after) const {
  return impl_->next_deadline(after);
}

std::vector<Tuple> Monitor::instances(StreamId stream) const {
  std::vector<Tuple> out;
  for (const auto& [params, inst] : impl_->streams.at(stream.value).instances) out.push_back(params);
  return out;
}

std::optional<Value> Monitor::last_value(StreamId stream, const Tuple& params) const {
  const auto& instances = impl_->streams.at(stream.value).instances;
  auto it = instances.find(params);
  if (it == instances.end() || it->second.prefix.empty()) return std::nullopt;
  return it->second.prefix.back().second;
}

std::size_t Monitor::instance_count() const {
  std::size_t n = 0;
  for (const auto& st : impl_->streams) n += st.instances.size();
  return n;
}

const MonitorReport& Monitor::report() const { return impl_->report; }
MonitorReport Monitor::take_report() { return std::move(impl_->report); }

MonitorReport run(const Specification& spec, const ValueTyping& types, const PacingInfo& pacing, const Trace& trace,
                  const MonitorOptions& options) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].time < Rational(0) || (i > 0 && trace[i].time <= trace[i - 1].time)) {
      throw MonitorError(MonitorErrorKind::NonMonotoneTrace, trace[i].time, Span{},
                         "trace time " + trace[i].time.to_string() + " at event " + std::to_string(i + 1) +
                             " does not strictly increase");
    }
  }
  Monitor monitor(spec, types, pacing, options);
  std::optional<Rational> end = options.end_time;
  if (!end && !trace.empty()) end = trace.back().time;
  if (!end) return monitor.take_report();

  static const std::vector<std::pair<std::uint32_t, Value>> no_inputs;
  std::size_t next = 0;
  std::optional<Rational> last;
  while (true) {
    std::optional<Rational> t = monitor.next_deadline(last);
    if (next < trace.size() && (!t || trace[next].time <= *t)) t = trace[next].time;
    if (!t || *t > *end) break;
    if (next < trace.size() && trace[next].time == *t) {
      monitor.step(*t, trace[next++].values);
    } else {
      monitor.step(*t, no_inputs);
    }
    last = t;
  }
  return monitor.take_report();
}

MonitorReport run(const Analysis& analysis, const Trace& trace, const MonitorOptions& options) {
  return run(*analysis.spec, analysis.values, analysis.pacing, trace, options);
}

}  // namespace lola
