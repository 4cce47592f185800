#include "lola/pacing.hpp"

#include <stdexcept>

namespace lola {

PacingType PacingType::event(ActivationFormula f) {
  PacingType t(Kind::Event);
  t.formula_ = std::move(f);
  return t;
}

PacingType PacingType::global(Rational period) {
  PacingType t(Kind::Global);
  t.period_ = period;
  return t;
}

PacingType PacingType::local(Rational period) {
  PacingType t(Kind::Local);
  t.period_ = period;
  return t;
}

PacingType PacingType::from_annotation(const PacingAnnotation& a) {
  switch (a.kind) {
    case PacingAnnotation::Kind::Any: return top();
    case PacingAnnotation::Kind::Event: return event(a.formula);
    case PacingAnnotation::Kind::GlobalPeriod: return global(a.period);
    case PacingAnnotation::Kind::LocalPeriod: return local(a.period);
  }
  return top();
}

std::string PacingType::to_string(const std::function<std::string(std::uint32_t)>& input_name) const {
  switch (kind_) {
    case Kind::Top: return "⊤";
    case Kind::Bottom: return "⊥";
    case Kind::Periodic: return "Periodic";
    case Kind::Event: return "Event(" + formula_.to_string(input_name) + ")";
    case Kind::Global: return "Global(" + period_.to_string() + "s)";
    case Kind::Local: return "Local(" + period_.to_string() + "s)";
  }
  return "?";
}

bool pt_le(const PacingType& a, const PacingType& b) {
  using K = PacingType::Kind;
  if (b.kind() == K::Top || a.kind() == K::Bottom) return true;
  if (a.kind() == K::Top || b.kind() == K::Bottom) return false;
  switch (b.kind()) {
    case K::Periodic:
      return a.kind() == K::Periodic || a.kind() == K::Global || a.kind() == K::Local;
    case K::Event:
      return a.kind() == K::Event && a.formula().implies(b.formula());
    case K::Global:
    case K::Local:
      return a.kind() == b.kind() && is_multiple_of(a.period(), b.period());
    default:
      return false;
  }
}

PacingType pt_meet(const PacingType& a, const PacingType& b) {
  using K = PacingType::Kind;
  if (a.kind() == K::Top) return b;
  if (b.kind() == K::Top) return a;
  if (a.kind() == K::Bottom || b.kind() == K::Bottom) return PacingType::bottom();
  if (a.kind() == K::Periodic && (b.kind() == K::Periodic || b.kind() == K::Global || b.kind() == K::Local)) return b;
  if (b.kind() == K::Periodic && (a.kind() == K::Global || a.kind() == K::Local)) return a;
  if (a.kind() == K::Event && b.kind() == K::Event) return PacingType::event(a.formula() && b.formula());
  if (a.kind() == b.kind() && (a.kind() == K::Global || a.kind() == K::Local)) {
    try {
      Rational p = lcm(a.period(), b.period());
      return a.kind() == K::Global ? PacingType::global(p) : PacingType::local(p);
    } catch (const std::overflow_error&) {
      return PacingType::bottom();
    }
  }
  return PacingType::bottom();
}

PacingType pt_join(const PacingType& a, const PacingType& b) {
  using K = PacingType::Kind;
  if (a.kind() == K::Bottom) return b;
  if (b.kind() == K::Bottom) return a;
  if (a.kind() == K::Top || b.kind() == K::Top) return PacingType::top();
  if (a.kind() == K::Event && b.kind() == K::Event) return PacingType::event(a.formula() || b.formula());
  if (a.kind() == K::Event || b.kind() == K::Event) return PacingType::top();
  if (a.kind() == b.kind() && (a.kind() == K::Global || a.kind() == K::Local)) {
    Rational p = gcd(a.period(), b.period());
    return a.kind() == K::Global ? PacingType::global(p) : PacingType::local(p);
  }
  return PacingType::periodic();
}

namespace {

enum class Slot { Eval, Spawn, Close };

class Inference {
 public:
  explicit Inference(const Specification& spec) : spec_(spec) {}

  PacingResult run() {
    const std::size_t n = spec_.stream_count();
    info_.streams.resize(n);
    info_.expr_eval.assign(spec_.expression_count, PacingType::top());
    info_.expr_spawn.assign(spec_.expression_count, PacingType::top());
    info_.expr_close.assign(spec_.expression_count, PacingType::bottom());
    for (std::size_t i = 0; i < spec_.inputs.size(); ++i) {
      info_.streams[i].eval = PacingType::event(ActivationFormula::input(static_cast<std::uint32_t>(i)));
    }
    solve_eval_slots();
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      const OutputStream& out = spec_.outputs[o];
      StreamPacing& sp = info_.streams[spec_.inputs.size() + o];
      sp.spawn = declared_or_inferred(out.spawn, {&out.spawn.when, &*out.spawn.with});
      sp.close = out.close.written ? declared_or_inferred(out.close, {&out.close.when}) : PacingType::bottom();
    }
    for (const auto& out : spec_.outputs) {
      fill_slots(out.spawn.when);
      fill_slots(*out.spawn.with);
      fill_slots(out.eval.when);
      fill_slots(*out.eval.with);
      fill_slots(out.close.when);
    }
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) check_stream(o);
    sort_by_position(diags_);
    PacingResult result;
    result.info = std::move(info_);
    result.diagnostics = std::move(diags_);
    return result;
  }

 private:
  // Eval-slot contribution of an expression under the current assignment.
  PacingType eval_slot(const Expression& e) const {
    PacingType acc = PacingType::top();
    switch (e.kind) {
      case ExprKind::Sync:
      case ExprKind::Offset:
        acc = info_.streams[e.target.value].eval;
        break;
      case ExprKind::Aggregate:
        acc = PacingType::periodic();
        break;
      default:
        break;
    }
    for (const auto& a : e.args) acc = pt_meet(acc, eval_slot(a));
    return acc;
  }

  PacingType declared_or_inferred(const Declaration& d, std::initializer_list<const Expression*> exprs) const {
    if (d.pacing.kind != PacingAnnotation::Kind::Any) return PacingType::from_annotation(d.pacing);
    PacingType acc = PacingType::top();
    for (const Expression* e : exprs) acc = pt_meet(acc, eval_slot(*e));
    return acc;
  }

  void solve_eval_slots() {
    const std::size_t first = spec_.inputs.size();
    for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
      const Declaration& d = spec_.outputs[o].eval;
      info_.streams[first + o].eval =
          d.pacing.kind == PacingAnnotation::Kind::Any ? PacingType::top() : PacingType::from_annotation(d.pacing);
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t o = 0; o < spec_.outputs.size(); ++o) {
        const OutputStream& out = spec_.outputs[o];
        if (out.eval.pacing.kind != PacingAnnotation::Kind::Any) continue;
        PacingType& current = info_.streams[first + o].eval;
        PacingType next = pt_meet(current, pt_meet(eval_slot(out.eval.when), eval_slot(*out.eval.with)));
        if (!(next == current)) {
          current = std::move(next);
          changed = true;
        }
      }
    }
  }

  void fill_slots(const Expression& e) {
    PacingType ev = PacingType::top();
    PacingType sp = PacingType::top();
    PacingType cl = PacingType::bottom();
    if (e.kind == ExprKind::Sync || e.kind == ExprKind::Offset) {
      const StreamPacing& target = info_.streams[e.target.value];
      ev = target.eval;
      sp = target.spawn;
      cl = target.close;
    } else if (e.kind == ExprKind::Aggregate) {
      ev = PacingType::periodic();
    }
    for (const auto& a : e.args) {
      fill_slots(a);
      ev = pt_meet(ev, info_.expr_eval[a.id]);
      sp = pt_meet(sp, info_.expr_spawn[a.id]);
      cl = pt_join(cl, info_.expr_close[a.id]);
    }
    info_.expr_eval[e.id] = ev;
    info_.expr_spawn[e.id] = sp;
    info_.expr_close[e.id] = cl;
  }

  // Own contribution of a single node, ignoring its arguments.
  PacingType own(const Expression& e, Slot slot) const {
    bool sync = e.kind == ExprKind::Sync || e.kind == ExprKind::Offset;
    switch (slot) {
      case Slot::Eval:
        if (sync) return info_.streams[e.target.value].eval;
        if (e.kind == ExprKind::Aggregate) return PacingType::periodic();
        return PacingType::top();
      case Slot::Spawn:
        return sync ? info_.streams[e.target.value].spawn : PacingType::top();
      case Slot::Close:
        return sync ? info_.streams[e.target.value].close : PacingType::bottom();
    }
    return PacingType::top();
  }

  template <typename Pred>
  std::vector<const Expression*> offending(std::initializer_list<const Expression*> roots, Slot slot, Pred bad) const {
    std::vector<const Expression*> out;
    for (const Expression* root : roots) {
      visit_expressions(*root, [&](const Expression& e) {
        if (!e.is_access()) return;
        PacingType c = own(e, slot);
        if (bad(c)) out.push_back(&e);
      });
    }
    return out;
  }

  std::string show(const PacingType& t) const {
    return t.to_string([this](std::uint32_t i) { return spec_.inputs[i].name; });
  }

  void report(DiagCode code, const std::vector<const Expression*>& at, Span fallback, const std::string& message,
              const OutputStream& out) {
    if (at.empty()) {
      diags_.push_back(error(code, fallback, message));
      return;
    }
    for (const Expression* e : at) {
      diags_.push_back(error(code, e->span, message, "in access '" + render(*e, spec_, &out) + "'"));
    }
  }

  static Span clause_span(const Declaration& d, Span fallback) {
    if (d.pacing.kind != PacingAnnotation::Kind::Any) return d.pacing.span;
    if (d.span.end > d.span.begin) return d.span;
    return fallback;
  }

  void check_annotation(const OutputStream& out, const Declaration& d, std::initializer_list<const Expression*> exprs,
                        const char* what) {
    if (d.pacing.kind == PacingAnnotation::Kind::Any) return;
    PacingType ann = PacingType::from_annotation(d.pacing);
    PacingType inferred = PacingType::top();
    for (const Expression* e : exprs) inferred = pt_meet(inferred, info_.expr_eval[e->id]);
    if (pt_le(ann, inferred)) return;
    auto bad = offending(exprs, Slot::Eval, [&](const PacingType& c) { return !pt_le(ann, c); });
    report(DiagCode::PacingMismatch, bad, d.pacing.span,
           std::string(what) + " of '" + out.name + "' is annotated " + show(ann) +
               " but accesses streams with incompatible pacing " + show(inferred),
           out);
  }

  void check_stream(std::size_t o) {
    const OutputStream& out = spec_.outputs[o];
    const StreamPacing& sp = info_.streams[spec_.inputs.size() + o];
    const Expression& spawn_with = *out.spawn.with;
    const Expression& eval_with = *out.eval.with;
    std::size_t before = diags_.size();

    check_annotation(out, out.spawn, {&out.spawn.when, &spawn_with}, "spawn clause");
    check_annotation(out, out.eval, {&out.eval.when, &eval_with}, "eval clause");
    check_annotation(out, out.close, {&out.close.when}, "close clause");
    if (diags_.size() != before) return;

    const PacingType& E = sp.eval;
    const PacingType& S = sp.spawn;
    const PacingType& C = sp.close;
    Span eval_span = clause_span(out.eval, out.name_span);
    if (E.is_bottom()) {
      diags_.push_back(error(DiagCode::PacingMismatch, eval_span,
                             "'" + out.name + "' accesses streams whose pacings have no common evaluation points"));
      return;
    }
    if (E.is_top() || E.kind() == PacingType::Kind::Periodic) {
      diags_.push_back(error(DiagCode::UnderspecifiedPacing, out.name_span,
                             "cannot infer when '" + out.name + "' is evaluated; annotate its eval clause with a pacing"));
      return;
    }
    if (out.spawn.written) {
      if (S.is_bottom()) {
        diags_.push_back(error(DiagCode::PacingMismatch, clause_span(out.spawn, out.name_span),
                               "spawn clause of '" + out.name + "' accesses streams with incompatible pacings"));
        return;
      }
      if (S.kind() == PacingType::Kind::Periodic) {
        diags_.push_back(error(DiagCode::UnderspecifiedPacing, clause_span(out.spawn, out.name_span),
                               "cannot infer when the spawn clause of '" + out.name + "' is evaluated"));
        return;
      }
    }
    if (out.close.written) {
      if (C.is_bottom()) {
        diags_.push_back(error(DiagCode::PacingMismatch, clause_span(out.close, out.name_span),
                               "close clause of '" + out.name + "' accesses streams with incompatible pacings"));
        return;
      }
      if (C.is_top() || C.kind() == PacingType::Kind::Periodic) {
        diags_.push_back(error(DiagCode::UnderspecifiedPacing, clause_span(out.close, out.name_span),
                               "cannot infer when the close clause of '" + out.name + "' is evaluated"));
        return;
      }
    }

    // The spawn declaration runs before any instance exists.
    PacingType spawn_s = pt_meet(info_.expr_spawn[out.spawn.when.id], info_.expr_spawn[spawn_with.id]);
    PacingType spawn_c = pt_join(info_.expr_close[out.spawn.when.id], info_.expr_close[spawn_with.id]);
    if (!spawn_s.is_top() || !spawn_c.is_bottom()) {
      auto bad = offending({&out.spawn.when, &spawn_with}, Slot::Spawn, [](const PacingType& c) { return !c.is_top(); });
      auto bad_close =
          offending({&out.spawn.when, &spawn_with}, Slot::Close, [](const PacingType& c) { return !c.is_bottom(); });
      bad.insert(bad.end(), bad_close.begin(), bad_close.end());
      report(DiagCode::PacingMismatch, bad, clause_span(out.spawn, out.name_span),
             "spawn clause of '" + out.name + "' may not synchronously access parameterized or closing streams", out);
    }

    PacingType eval_s = pt_meet(info_.expr_spawn[out.eval.when.id], info_.expr_spawn[eval_with.id]);
    PacingType eval_c = pt_join(info_.expr_close[out.eval.when.id], info_.expr_close[eval_with.id]);
    const std::initializer_list<const Expression*> eval_roots = {&out.eval.when, &eval_with};
    if (!pt_le(S, eval_s)) {
      auto bad = offending(eval_roots, Slot::Spawn, [&](const PacingType& c) { return !pt_le(S, c); });
      report(DiagCode::PacingMismatch, bad, eval_span,
             "'" + out.name + "' may exist while a synchronously accessed instance does not; its spawn pacing " +
                 show(S) + " is not more concrete than " + show(eval_s),
             out);
    }
    if (!pt_le(eval_c, C)) {
      auto bad = offending(eval_roots, Slot::Close, [&](const PacingType& c) { return !pt_le(c, C); });
      report(DiagCode::PacingMismatch, bad, eval_span,
             "'" + out.name + "' may outlive a synchronously accessed instance; its close pacing " + show(C) +
                 " does not cover " + show(eval_c),
             out);
    }

    PacingType close_s = info_.expr_spawn[out.close.when.id];
    PacingType close_c = info_.expr_close[out.close.when.id];
    if (!(close_s.is_top() || close_s == S) || !(close_c.is_bottom() || close_c == C)) {
      auto bad = offending({&out.close.when}, Slot::Spawn, [&](const PacingType& c) { return !(c.is_top() || c == S); });
      auto bad_close =
          offending({&out.close.when}, Slot::Close, [&](const PacingType& c) { return !(c.is_bottom() || c == C); });
      bad.insert(bad.end(), bad_close.begin(), bad_close.end());
      report(DiagCode::PacingMismatch, bad, clause_span(out.close, out.name_span),
             "close clause of '" + out.name + "' accesses instances that do not share its lifetime", out);
    }

    auto local_check = [&](std::initializer_list<const Expression*> roots, const PacingType& slot_s,
                           const PacingType& slot_c, Span fallback) {
      bool spawn_ok = slot_s.is_top() || slot_s == S;
      bool close_ok = slot_c.is_bottom() || slot_c == C;
      if (spawn_ok && close_ok) return;
      auto bad = offending(roots, Slot::Spawn, [&](const PacingType& c) { return !(c.is_top() || c == S); });
      auto bad_close = offending(roots, Slot::Close, [&](const PacingType& c) { return !(c.is_bottom() || c == C); });
      bad.insert(bad.end(), bad_close.begin(), bad_close.end());
      report(DiagCode::LocalSyncViolation, bad, fallback,
             "local clock of '" + out.name +
                 "' is shifted against the accessed instance; both must be spawned and closed together",
             out);
    };
    if (E.kind() == PacingType::Kind::Local) local_check(eval_roots, eval_s, eval_c, eval_span);
    if (C.kind() == PacingType::Kind::Local) {
      local_check({&out.close.when}, close_s, close_c, clause_span(out.close, out.name_span));
    }
  }

  const Specification& spec_;
  PacingInfo info_;
  Diagnostics diags_;
};

}  // namespace

PacingResult infer_pacing(const Specification& spec) { return Inference(spec).run(); }

}  // namespace lola
