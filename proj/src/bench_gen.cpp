#include "lola/bench_gen.hpp"

#include <random>
#include <sstream>

namespace lola {
namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string sync_chain(std::size_t n) {
  std::ostringstream out;
  out << "input bench: Int\n";
  for (std::size_t i = 1; i <= n; ++i) {
    out << "output s" << i << " := " << (i == n ? "bench" : "s" + std::to_string(i + 1)) << "\n";
  }
  return out.str();
}

std::string param_chain(std::size_t n) {
  std::ostringstream out;
  out << "input bench: Int\n";
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t arity = n - i + 1;
    std::vector<std::string> params;
    std::vector<std::string> benches;
    std::vector<std::string> args;
    for (std::size_t k = 1; k <= arity; ++k) {
      params.push_back("p" + std::to_string(k) + ": Int");
      benches.push_back("bench");
      if (k < arity) args.push_back("p" + std::to_string(k));
    }
    out << "output s" << i << "(" << join(params, ", ") << ")\n";
    out << "    spawn with (" << join(benches, ", ") << ")\n";
    if (i == n) {
      out << "    eval with bench\n";
    } else {
      out << "    eval with s" << i + 1 << "(" << join(args, ", ") << ")\n";
    }
  }
  return out.str();
}

std::string conjunct_chain(std::size_t n) {
  std::ostringstream out;
  for (std::size_t k = 1; k <= n; ++k) out << "input i" << k << ": Bool\n";
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<std::string> conj;
    for (std::size_t k = 1; k <= n - i + 1; ++k) conj.push_back("i" + std::to_string(k));
    out << "output s" << i << "\n";
    out << "    eval when " << join(conj, " && ") << " with " << (i == n ? "i1" : "s" + std::to_string(i + 1)) << "\n";
  }
  return out.str();
}

enum class VT { Int, Bool, Float };

std::string type_name(VT t) {
  switch (t) {
    case VT::Int: return "Int64";
    case VT::Bool: return "Bool";
    case VT::Float: return "Float64";
  }
  return "Int64";
}

struct GenStream {
  std::string name;
  VT type = VT::Int;
  bool input = false;
  PacingType pacing;
  int family = -1;
  bool filtered = false;
  bool gated = false;
  bool closes = false;
  bool trigger = false;
};

struct Family {
  std::size_t spawn_input = 0;
  std::string close;
};

// Where an expression is placed. Spawn and close clauses may only reach
// streams that exist for the whole run.
struct Ctx {
  std::size_t self = 0;
  PacingType pacing;
  int family = -1;
  bool self_offset = false;
  bool strict = false;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::string run(std::size_t budget) {
    std::size_t inputs = 1 + pick(3);
    for (std::size_t i = 0; i < inputs; ++i) {
      GenStream s;
      s.name = "in" + std::to_string(i);
      s.type = i == 0 ? VT::Int : static_cast<VT>(pick(3));
      s.input = true;
      s.pacing = PacingType::event(ActivationFormula::input(static_cast<std::uint32_t>(i)));
      if (s.type == VT::Int) int_inputs_.push_back(i);
      streams_.push_back(s);
      text_ += "input " + s.name + ": " + type_name(s.type) + "\n";
    }
    inputs_ = inputs;
    std::size_t outputs = 1 + pick(std::max<std::size_t>(budget, 1));
    for (std::size_t o = 0; o < outputs; ++o) {
      switch (pick(10)) {
        case 0:
        case 1:
        case 2: plain_event(); break;
        case 3:
        case 4: plain_periodic(); break;
        case 5: filtered(); break;
        case 6: gated(); break;
        default: family_member(); break;
      }
    }
    if (coin(0.5) && outputs < budget) trigger();
    return text_;
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string literal(VT t) {
    switch (t) {
      case VT::Int: return std::to_string(pick(4));
      case VT::Float: return std::vector<std::string>{"0.0", "0.5", "1.0", "2.5"}[pick(4)];
      case VT::Bool: return coin(0.5) ? "true" : "false";
    }
    return "0";
  }

  // Random conjunction or disjunction of inputs, with its source text.
  std::pair<PacingType, std::string> event_pacing() {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < inputs_; ++i) {
      if (coin(0.5)) chosen.push_back(i);
    }
    if (chosen.empty()) chosen.push_back(pick(inputs_));
    bool disjunction = chosen.size() > 1 && coin(0.2);
    ActivationFormula f = ActivationFormula::input(static_cast<std::uint32_t>(chosen[0]));
    std::vector<std::string> names{streams_[chosen[0]].name};
    for (std::size_t k = 1; k < chosen.size(); ++k) {
      auto g = ActivationFormula::input(static_cast<std::uint32_t>(chosen[k]));
      f = disjunction ? (f || g) : (f && g);
      names.push_back(streams_[chosen[k]].name);
    }
    return {PacingType::event(f), "@" + join(names, disjunction ? " || " : " && ") + "@"};
  }

  std::pair<Rational, std::string> period() {
    switch (pick(3)) {
      case 0: return {Rational(1, 2), "500ms"};
      case 1: return {Rational(1), "1s"};
      default: return {Rational(2), "2s"};
    }
  }

  std::string duration() { return std::vector<std::string>{"500ms", "1s", "2s"}[pick(3)]; }

  // Instance selector for an access to `target`, or nullopt if none is available.
  std::optional<std::string> selector(const GenStream& target, const Ctx& c, bool synchronous) {
    if (target.family < 0) return std::string();
    if (target.family == c.family && !c.strict) return std::string("(p)");
    if (synchronous) return std::nullopt;
    if (c.family >= 0 && coin(0.5)) return std::string("(p)");
    std::vector<std::string> args;
    for (std::size_t k : int_inputs_) {
      if (pt_le(c.pacing, streams_[k].pacing)) args.push_back("(" + streams_[k].name + ")");
    }
    if (args.empty()) return std::nullopt;
    return args[pick(args.size())];
  }

  bool sync_ok(std::size_t j, const Ctx& c) const {
    const GenStream& s = streams_[j];
    if (!s.input) {
      if (j >= c.self || s.filtered || s.gated || s.trigger) return false;
      if (s.family >= 0 && (s.family != c.family || c.strict)) return false;
    }
    return pt_le(c.pacing, s.pacing);
  }

  bool readable(std::size_t j, const Ctx& c) const { return streams_[j].input || (j < c.self && !streams_[j].trigger); }

  bool periodic(const Ctx& c) const {
    return c.pacing.kind() == PacingType::Kind::Global || c.pacing.kind() == PacingType::Kind::Local;
  }

  std::string atom(VT t, const Ctx& c) {
    std::vector<std::string> options;
    if (t == VT::Int && c.family >= 0) options.push_back("p");
    const std::size_t limit = std::min(c.self, streams_.size());
    for (std::size_t j = 0; j < limit; ++j) {
      const GenStream& s = streams_[j];
      if (s.type == t && sync_ok(j, c)) {
        auto sel = selector(s, c, true);
        if (sel) {
          options.push_back(s.name + *sel);
          options.push_back(s.name + *sel);
          if (!s.input && coin(0.3)) {
            options.push_back(s.name + *sel + ".offset(by: -" + std::to_string(1 + pick(2)) + ", or: " + literal(t) + ")");
          }
        }
      }
      if (s.type == t && readable(j, c) && coin(0.5)) {
        if (auto sel = selector(s, c, false)) options.push_back(s.name + *sel + ".hold(or: " + literal(t) + ")");
      }
      if (periodic(c) && readable(j, c) && coin(0.4)) {
        if (auto sel = selector(s, c, false)) {
          if (auto a = aggregate(s.name + *sel, s.type, t)) options.push_back(*a);
        }
      }
    }
    if (c.self_offset && streams_[c.self].type == t) {
      std::string self = streams_[c.self].name + (c.family >= 0 ? "(p)" : "");
      options.push_back(self + ".offset(by: -" + std::to_string(1 + pick(2)) + ", or: " + literal(t) + ")");
    }
    if (options.empty() || coin(0.15)) return literal(t);
    return options[pick(options.size())];
  }

  std::optional<std::string> aggregate(const std::string& access, VT target, VT want) {
    const std::string exact = coin(0.25) ? "over_exactly" : "over";
    const std::string window = ".aggregate(" + exact + ": " + duration() + ", using: ";
    auto guarded = [&](const std::string& fn) {
      return access + window + fn + ").defaults(to: " + literal(want) + ")";
    };
    if (want == VT::Int && coin(0.3)) {
      std::string count = access + window + "count)";
      if (exact == "over_exactly") count += ".defaults(to: 0)";
      return "cast<UInt64, Int64>(" + count + ")";
    }
    if (target != want) return std::nullopt;
    if (target == VT::Bool) {
      std::string fn = coin(0.5) ? "exists" : "forall";
      return exact == "over" ? access + window + fn + ")" : guarded(fn);
    }
    switch (pick(4)) {
      case 0: return exact == "over" ? access + window + "sum)" : guarded("sum");
      case 1: return guarded("avg");
      case 2: return guarded("min");
      default: return guarded("max");
    }
  }

  std::string expr(VT t, const Ctx& c, int depth) {
    if (depth <= 0 || coin(0.3)) return atom(t, c);
    if (t == VT::Bool) {
      switch (pick(4)) {
        case 0: {
          VT operand = coin(0.5) ? VT::Int : VT::Float;
          static const char* ops[] = {" < ", " <= ", " > ", " >= ", " = ", " != "};
          return "(" + expr(operand, c, depth - 1) + ops[pick(6)] + expr(operand, c, depth - 1) + ")";
        }
        case 1: return "(" + expr(VT::Bool, c, depth - 1) + " && " + expr(VT::Bool, c, depth - 1) + ")";
        case 2: return "(" + expr(VT::Bool, c, depth - 1) + " || " + expr(VT::Bool, c, depth - 1) + ")";
        default: return "!(" + expr(VT::Bool, c, depth - 1) + ")";
      }
    }
    if (coin(0.2)) {
      return "(if " + expr(VT::Bool, c, depth - 1) + " then " + expr(t, c, depth - 1) + " else " +
             expr(t, c, depth - 1) + ")";
    }
    static const char* ops[] = {" + ", " - ", " * "};
    return "(" + expr(t, c, depth - 1) + ops[pick(3)] + expr(t, c, depth - 1) + ")";
  }

  GenStream& add(const std::string& prefix, VT type) {
    GenStream s;
    s.name = prefix + std::to_string(streams_.size());
    s.type = type;
    streams_.push_back(s);
    return streams_.back();
  }

  Ctx eval_ctx(const PacingType& p, int family) const {
    Ctx c;
    c.self = streams_.size() - 1;
    c.pacing = p;
    c.family = family;
    c.self_offset = true;
    return c;
  }

  std::string header(const GenStream& s) const {
    std::string params = s.family >= 0 ? "(p: Int64)" : "";
    return "output " + s.name + params + ": " + type_name(s.type);
  }

  void plain_event() {
    auto [p, text] = event_pacing();
    GenStream& s = add("s", static_cast<VT>(pick(3)));
    s.pacing = p;
    text_ += header(s) + " " + text + " := " + expr(s.type, eval_ctx(p, -1), 3) + "\n";
  }

  void plain_periodic() {
    auto [period_value, text] = period();
    GenStream& s = add("s", static_cast<VT>(pick(3)));
    s.pacing = PacingType::global(period_value);
    text_ += header(s) + " @" + text + "@ := " + expr(s.type, eval_ctx(s.pacing, -1), 3) + "\n";
  }

  void filtered() {
    auto [p, text] = event_pacing();
    GenStream& s = add("s", static_cast<VT>(pick(3)));
    s.pacing = p;
    Ctx when = eval_ctx(p, -1);
    when.self_offset = false;
    std::string cond = expr(VT::Bool, when, 2);
    streams_.back().filtered = true;
    const GenStream& g = streams_.back();
    text_ += header(g) + "\n    eval " + text + " when " + cond + " with " + expr(g.type, eval_ctx(p, -1), 3) + "\n";
  }

  std::string lifetime_clause(const std::string& keyword, int family) {
    auto [p, text] = event_pacing();
    Ctx c;
    c.self = streams_.size();
    c.pacing = p;
    c.family = family;
    c.strict = true;
    return "    " + keyword + " " + text + " when " + expr(VT::Bool, c, 2) + "\n";
  }

  void gated() {
    std::string spawn = lifetime_clause("spawn", -1);
    GenStream& s = add("s", static_cast<VT>(pick(3)));
    s.gated = true;
    std::string pacing_text;
    if (coin(0.5)) {
      auto [p, text] = event_pacing();
      s.pacing = p;
      pacing_text = text;
    } else {
      auto [period_value, text] = period();
      s.pacing = PacingType::local(period_value);
      pacing_text = "@" + text + "@";
    }
    const GenStream g = s;
    std::string close;
    if (coin(0.5)) {
      streams_.back().closes = true;
      close = lifetime_clause("close", -1);
    }
    text_ += header(g) + "\n" + spawn + "    eval " + pacing_text + " with " + expr(g.type, eval_ctx(g.pacing, -1), 3) +
             "\n" + close;
  }

  void family_member() {
    if (families_.empty() || coin(0.25)) {
      Family f;
      f.spawn_input = int_inputs_[pick(int_inputs_.size())];
      if (coin(0.5)) f.close = lifetime_clause("close", static_cast<int>(families_.size()));
      families_.push_back(f);
    }
    int family = static_cast<int>(pick(families_.size()));
    const Family& f = families_[family];
    GenStream& s = add("f", static_cast<VT>(pick(3)));
    s.family = family;
    s.closes = !f.close.empty();
    std::string pacing_text;
    if (coin(0.7)) {
      auto [p, text] = event_pacing();
      s.pacing = p;
      pacing_text = text;
    } else {
      auto [period_value, text] = period();
      s.pacing = PacingType::local(period_value);
      pacing_text = "@" + text + "@";
    }
    std::string when;
    if (coin(0.2)) {
      Ctx c = eval_ctx(s.pacing, family);
      c.self_offset = false;
      when = " when " + expr(VT::Bool, c, 2);
      streams_.back().filtered = true;
    }
    const GenStream g = streams_.back();
    text_ += header(g) + "\n    spawn with " + streams_[f.spawn_input].name + "\n    eval " + pacing_text + when +
             " with " + expr(g.type, eval_ctx(g.pacing, family), 3) + "\n" + f.close;
  }

  void trigger() {
    GenStream& s = add("t", VT::Bool);
    s.trigger = true;
    std::string pacing_text;
    if (coin(0.6)) {
      auto [p, text] = event_pacing();
      s.pacing = p;
      pacing_text = text;
    } else {
      auto [period_value, text] = period();
      s.pacing = PacingType::global(period_value);
      pacing_text = "@" + text + "@";
    }
    Ctx c = eval_ctx(streams_.back().pacing, -1);
    c.self_offset = false;
    text_ += "trigger " + pacing_text + " " + expr(VT::Bool, c, 3) + " \"alarm\"\n";
  }

  std::mt19937_64 rng_;
  std::vector<GenStream> streams_;
  std::vector<Family> families_;
  std::vector<std::size_t> int_inputs_;
  std::size_t inputs_ = 0;
  std::string text_;
};

Value random_value(const ValueType& t, std::mt19937_64& rng, int max_int) {
  auto below = [&](int n) { return std::uniform_int_distribution<int>(0, n)(rng); };
  switch (t.kind()) {
    case ValueType::Kind::Bool: return Value(below(1) == 1);
    case ValueType::Kind::UInt: return Value(static_cast<std::uint64_t>(below(max_int)));
    case ValueType::Kind::Float: return Value(below(2 * max_int) * 0.5);
    case ValueType::Kind::String: return Value("v" + std::to_string(below(max_int)));
    case ValueType::Kind::Tuple: {
      Tuple out;
      for (const auto& e : t.elements()) out.push_back(random_value(e, rng, max_int));
      return Value(std::move(out));
    }
    default: return Value(static_cast<std::int64_t>(below(max_int)));
  }
}

}  // namespace

std::optional<BenchKind> bench_kind_from_name(std::string_view name) {
  if (name == "sync" || name == "SyncChain") return BenchKind::SyncChain;
  if (name == "param" || name == "ParamChain") return BenchKind::ParamChain;
  if (name == "conjunct" || name == "ConjunctChain") return BenchKind::ConjunctChain;
  return std::nullopt;
}

std::string_view bench_kind_name(BenchKind kind) {
  switch (kind) {
    case BenchKind::SyncChain: return "SyncChain";
    case BenchKind::ParamChain: return "ParamChain";
    case BenchKind::ConjunctChain: return "ConjunctChain";
  }
  return "?";
}

std::string generate(BenchKind kind, std::size_t n) {
  if (n == 0) n = 1;
  switch (kind) {
    case BenchKind::SyncChain: return sync_chain(n);
    case BenchKind::ParamChain: return param_chain(n);
    case BenchKind::ConjunctChain: return conjunct_chain(n);
  }
  return {};
}

std::string random_welltyped(std::uint64_t seed, std::size_t budget) { return Generator(seed).run(budget); }

Trace random_trace(const Specification& spec, const ValueTyping& types, std::uint64_t seed, std::size_t events,
                   int max_int) {
  std::mt19937_64 rng(seed);
  static const Rational steps[] = {Rational(1, 4), Rational(1, 2), Rational(1)};
  Trace trace;
  Rational time(0);
  for (std::size_t k = 0; k < events && !spec.inputs.empty(); ++k) {
    if (k > 0) time += steps[std::uniform_int_distribution<int>(0, 2)(rng)];
    TraceEvent event{time, {}};
    for (std::uint32_t i = 0; i < spec.inputs.size(); ++i) {
      if (std::bernoulli_distribution(0.6)(rng)) event.values.emplace_back(i, random_value(types.streams[i], rng, max_int));
    }
    if (event.values.empty()) {
      auto i = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, spec.inputs.size() - 1)(rng));
      event.values.emplace_back(i, random_value(types.streams[i], rng, max_int));
    }
    trace.push_back(std::move(event));
  }
  return trace;
}

}  // namespace lola
