#include "lola/semantic.hpp"

#include <algorithm>
#include <map>

namespace lola {
namespace {

void flatten_and(const Expression& e, std::vector<const Expression*>& out) {
  if (e.kind == ExprKind::Function && e.builtin == Builtin::And) {
    for (const auto& a : e.args) flatten_and(a, out);
  } else {
    out.push_back(&e);
  }
}

Expression substitute(const Expression& e, const std::vector<Expression>& args) {
  if (e.kind == ExprKind::Parameter && e.index < args.size()) return args[e.index];
  Expression copy = e;
  for (auto& a : copy.args) a = substitute(a, args);
  return copy;
}

}  // namespace

SemanticType SemanticType::from_conjuncts(std::vector<Conjunct> conjuncts) {
  if (conjuncts.empty()) return top();
  std::sort(conjuncts.begin(), conjuncts.end(), [](const Conjunct& a, const Conjunct& b) { return a.key < b.key; });
  conjuncts.erase(std::unique(conjuncts.begin(), conjuncts.end(),
                              [](const Conjunct& a, const Conjunct& b) { return a.key == b.key; }),
                  conjuncts.end());
  SemanticType t(Kind::Expr);
  t.conjuncts_ = std::move(conjuncts);
  return t;
}

SemanticType SemanticType::from_expression(const Expression& e, const Specification& spec, const OutputStream* self) {
  std::vector<const Expression*> parts;
  flatten_and(e, parts);
  std::vector<Conjunct> conjuncts;
  for (const Expression* p : parts) {
    if (p->is_literal(true)) continue;
    if (p->is_literal(false)) return bottom();
    conjuncts.push_back({structural_key(*p, true), render(*p, spec, self)});
  }
  return from_conjuncts(std::move(conjuncts));
}

SemanticType SemanticType::from_keys(std::vector<std::string> keys) {
  std::vector<Conjunct> conjuncts;
  for (auto& k : keys) conjuncts.push_back({k, k});
  return from_conjuncts(std::move(conjuncts));
}

std::string SemanticType::to_string() const {
  switch (kind_) {
    case Kind::Top: return "⊤";
    case Kind::Bottom: return "⊥";
    case Kind::Expr: break;
  }
  std::string out;
  for (std::size_t i = 0; i < conjuncts_.size(); ++i) {
    if (i) out += " && ";
    out += conjuncts_[i].text;
  }
  return out;
}

bool operator==(const SemanticType& a, const SemanticType& b) {
  if (a.kind_ != b.kind_ || a.conjuncts_.size() != b.conjuncts_.size()) return false;
  for (std::size_t i = 0; i < a.conjuncts_.size(); ++i) {
    if (a.conjuncts_[i].key != b.conjuncts_[i].key) return false;
  }
  return true;
}

bool st_le(const SemanticType& a, const SemanticType& b) {
  if (b.is_top() || a.is_bottom()) return true;
  if (a.is_top() || b.is_bottom()) return false;
  const auto& x = a.conjuncts();
  const auto& y = b.conjuncts();
  return std::includes(x.begin(), x.end(), y.begin(), y.end(),
                       [](const SemanticType::Conjunct& l, const SemanticType::Conjunct& r) { return l.key < r.key; });
}

SemanticType st_meet(const SemanticType& a, const SemanticType& b) {
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  if (a.is_bottom() || b.is_bottom()) return SemanticType::bottom();
  std::vector<SemanticType::Conjunct> all = a.conjuncts();
  all.insert(all.end(), b.conjuncts().begin(), b.conjuncts().end());
  return SemanticType::from_conjuncts(std::move(all));
}

SemanticType st_join(const SemanticType& a, const SemanticType& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  if (a.is_top() || b.is_top()) return SemanticType::top();
  std::vector<SemanticType::Conjunct> common;
  std::set_intersection(a.conjuncts().begin(), a.conjuncts().end(), b.conjuncts().begin(), b.conjuncts().end(),
                        std::back_inserter(common), [](const auto& l, const auto& r) { return l.key < r.key; });
  return SemanticType::from_conjuncts(std::move(common));
}

ParamEqRelation::ParamEqRelation(const Specification& spec) : spec_(&spec) {
  std::map<std::string, std::size_t> interned;
  for (const auto& out : spec.outputs) {
    keys_.emplace_back();
    for (const auto& e : out.spawn.with->args) {
      auto [it, inserted] = interned.emplace(structural_key(e, true), interned.size());
      keys_.back().push_back(it->second);
    }
  }
}

bool ParamEqRelation::related(StreamId a, std::size_t i, StreamId b, std::size_t j) const {
  if (spec_->is_input(a) || spec_->is_input(b)) return false;
  const auto& ka = keys_[a.value - spec_->inputs.size()];
  const auto& kb = keys_[b.value - spec_->inputs.size()];
  return i < ka.size() && j < kb.size() && ka[i] == kb[j];
}

std::vector<std::pair<std::size_t, std::size_t>> ParamEqRelation::pairs(StreamId a, StreamId b) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < spec_->param_count(a); ++i) {
    for (std::size_t j = 0; j < spec_->param_count(b); ++j) {
      if (related(a, i, b, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

namespace {

struct Slots {
  SemanticType s = SemanticType::top();
  SemanticType e = SemanticType::top();
  SemanticType c = SemanticType::bottom();

  void absorb(const Slots& o) {
    s = st_meet(s, o.s);
    e = st_meet(e, o.e);
    c = st_join(c, o.c);
  }
};

struct Access {
  const Expression* expr;
  Slots own;
};

class SemanticChecker {
 public:
  SemanticChecker(const Specification& spec, const PacingInfo& pacing) : spec_(spec), pacing_(pacing), eq_(spec) {}

  SemanticResult run() {
    result_.streams.resize(spec_.stream_count());
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      const OutputStream& out = spec_.outputs[o];
      SemanticTriple& t = result_.streams[spec_.inputs.size() + o];
      t.spawn = SemanticType::from_expression(out.spawn.when, spec_, &out);
      t.eval = SemanticType::from_expression(out.eval.when, spec_, &out);
      t.close = SemanticType::from_expression(out.close.when, spec_, &out);
    }
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) check_stream(o);
    sort_by_position(diags_);
    result_.diagnostics = std::move(diags_);
    return std::move(result_);
  }

 private:
  StreamId self_id() const { return spec_.output_id(owner_); }
  const OutputStream& self() const { return spec_.outputs[owner_]; }

  Slots target_slots(const Expression& access) const {
    const OutputStream& target = spec_.output(access.target);
    Slots s;
    s.s = result_.streams[access.target.value].spawn;
    if (access.args.empty()) {
      s.e = result_.streams[access.target.value].eval;
      s.c = result_.streams[access.target.value].close;
    } else {
      s.e = SemanticType::from_expression(substitute(target.eval.when, access.args), spec_, &self());
      s.c = SemanticType::from_expression(substitute(target.close.when, access.args), spec_, &self());
    }
    return s;
  }

  void check_parameters(const Expression& access) {
    for (std::size_t k = 0; k < access.args.size(); ++k) {
      const Expression& arg = access.args[k];
      if (arg.kind != ExprKind::Parameter) {
        diags_.push_back(error(DiagCode::NonParameterSyncArgument, arg.span,
                               "instance argument " + std::to_string(k + 1) + " of '" + spec_.name(access.target) +
                                   "' must be a parameter of '" + self().name + "'",
                               "synchronous and offset accesses may only select instances by parameters"));
        continue;
      }
      bool ok = false;
      if (access.kind == ExprKind::Sync) {
        ok = eq_.related(access.target, k, self_id(), arg.index);
      } else {
        for (std::size_t l = 0; l < spec_.param_count(access.target) && !ok; ++l) {
          ok = eq_.related(access.target, l, self_id(), arg.index);
        }
      }
      if (!ok) {
        std::string pname = arg.index < self().params.size() ? self().params[arg.index].name : "?";
        const OutputStream& target = spec_.output(access.target);
        std::string tname = k < target.params.size() ? target.params[k].name : "?";
        diags_.push_back(error(DiagCode::ParameterMismatch, arg.span,
                               "parameter '" + pname + "' of '" + self().name + "' is not instantiated like parameter '" +
                                   tname + "' of '" + target.name + "'",
                               "both must be spawned with the same expression"));
      }
    }
  }

  Slots slots(const Expression& e, std::vector<Access>& accesses) {
    Slots acc;
    bool sync = e.kind == ExprKind::Sync || e.kind == ExprKind::Offset;
    if (sync && !spec_.is_input(e.target)) {
      if (!e.args.empty()) check_parameters(e);
      acc = target_slots(e);
      accesses.push_back({&e, acc});
    }
    for (const auto& a : e.args) acc.absorb(slots(a, accesses));
    return acc;
  }

  void report(DiagCode code, const std::vector<const Expression*>& at, Span fallback, const std::string& message,
              const std::string& detail) {
    if (at.empty()) {
      diags_.push_back(error(code, fallback, message, detail));
      return;
    }
    for (const Expression* e : at) {
      diags_.push_back(error(code, e->span, message, detail + "; in access '" + render(*e, spec_, &self()) + "'"));
    }
  }

  template <typename Pred>
  static std::vector<const Expression*> offending(const std::vector<Access>& accesses, Pred bad) {
    std::vector<const Expression*> out;
    for (const auto& a : accesses) {
      if (bad(a.own)) out.push_back(a.expr);
    }
    return out;
  }

  static Span clause_span(const Declaration& d, Span fallback) { return d.span.end > d.span.begin ? d.span : fallback; }

  void check_stream(std::size_t o) {
    owner_ = o;
    const OutputStream& out = self();
    const SemanticTriple& pi = result_.streams[spec_.inputs.size() + o];
    const SemanticType& S = pi.spawn;
    const SemanticType& E = pi.eval;
    const SemanticType& C = pi.close;

    std::vector<Access> spawn_accesses;
    Slots sp = slots(out.spawn.when, spawn_accesses);
    sp.absorb(slots(*out.spawn.with, spawn_accesses));
    if (!sp.s.is_top() || !sp.c.is_bottom()) {
      auto bad = offending(spawn_accesses, [](const Slots& s) { return !s.s.is_top() || !s.c.is_bottom(); });
      report(DiagCode::SemanticRefinementMismatch, bad, clause_span(out.spawn, out.name_span),
             "spawn clause of '" + out.name + "' accesses instances that may not exist", "spawn type " + sp.s.to_string());
    }
    if (!st_le(S, sp.e)) {
      auto bad = offending(spawn_accesses, [&](const Slots& s) { return !st_le(S, s.e); });
      report(DiagCode::SemanticRefinementMismatch, bad, clause_span(out.spawn, out.name_span),
             "spawn condition of '" + out.name + "' does not guarantee that accessed streams have a value",
             "'" + S.to_string() + "' does not refine '" + sp.e.to_string() + "'");
    }

    std::vector<Access> eval_accesses;
    Slots ev = slots(out.eval.when, eval_accesses);
    ev.absorb(slots(*out.eval.with, eval_accesses));
    Span eval_span = clause_span(out.eval, out.name_span);
    if (!st_le(S, ev.s)) {
      auto bad = offending(eval_accesses, [&](const Slots& s) { return !st_le(S, s.s); });
      report(DiagCode::SemanticRefinementMismatch, bad, eval_span,
             "'" + out.name + "' may be spawned while an accessed instance is not",
             "spawn condition '" + S.to_string() + "' does not refine '" + ev.s.to_string() + "'");
    }
    if (!st_le(E, ev.e)) {
      auto bad = offending(eval_accesses, [&](const Slots& s) { return !st_le(E, s.e); });
      report(DiagCode::SemanticRefinementMismatch, bad, eval_span,
             "'" + out.name + "' may be evaluated when an accessed stream is not",
             "eval condition '" + E.to_string() + "' does not refine '" + ev.e.to_string() + "'");
    }
    if (!st_le(ev.c, C)) {
      auto bad = offending(eval_accesses, [&](const Slots& s) { return !st_le(s.c, C); });
      report(DiagCode::SemanticRefinementMismatch, bad, eval_span,
             "'" + out.name + "' may outlive an accessed instance",
             "close condition '" + C.to_string() + "' is not implied by '" + ev.c.to_string() + "'");
    }
    const StreamPacing& pacing = pacing_.streams[spec_.inputs.size() + o];
    if (pacing.eval.kind() == PacingType::Kind::Local) {
      bool ok_s = ev.s.is_top() || ev.s == S;
      bool ok_c = ev.c.is_bottom() || ev.c == C;
      if (!ok_s || !ok_c) {
        auto bad = offending(eval_accesses, [&](const Slots& s) {
          return !(s.s.is_top() || s.s == S) || !(s.c.is_bottom() || s.c == C);
        });
        report(DiagCode::LocalSyncViolation, bad, eval_span,
               "local clock of '" + out.name + "' is shifted against an accessed instance",
               "spawn and close conditions must coincide");
      }
    }

    std::vector<Access> close_accesses;
    Slots cl = slots(out.close.when, close_accesses);
    Span close_span = clause_span(out.close, out.name_span);
    bool ok_s = cl.s.is_top() || cl.s == S;
    bool ok_c = cl.c.is_bottom() || cl.c == C;
    if (!ok_s || !ok_c) {
      auto bad = offending(close_accesses, [&](const Slots& s) {
        return !(s.s.is_top() || s.s == S) || !(s.c.is_bottom() || s.c == C);
      });
      report(DiagCode::SemanticRefinementMismatch, bad, close_span,
             "close clause of '" + out.name + "' accesses instances that do not share its lifetime",
             "spawn type '" + cl.s.to_string() + "', close type '" + cl.c.to_string() + "'");
    }
    if (!cl.e.is_top()) {
      auto bad = offending(close_accesses, [](const Slots& s) { return !s.e.is_top(); });
      report(DiagCode::SemanticRefinementMismatch, bad, close_span,
             "close clause of '" + out.name + "' accesses a stream that is only evaluated conditionally",
             "condition '" + cl.e.to_string() + "'");
    }
  }

  const Specification& spec_;
  const PacingInfo& pacing_;
  ParamEqRelation eq_;
  SemanticResult result_;
  Diagnostics diags_;
  std::size_t owner_ = 0;
};

}  // namespace

SemanticResult check_semantic_types(const Specification& spec, const PacingInfo& pacing) {
  return SemanticChecker(spec, pacing).run();
}

}  // namespace lola
