#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lola/activation.hpp"
#include "lola/ast.hpp"
#include "lola/rational.hpp"

namespace lola {

// Pacing types ordered by how often a stream is evaluated: a ⊑ b when a is
// evaluated at a subset of the time points of b, so b is safe to access
// synchronously from a.
//
// Top lies above Event(f) and Periodic, Periodic lies above Global(p) and
// Local(p), and Bottom lies below every other type.
class PacingType {
 public:
  enum class Kind { Top, Periodic, Event, Global, Local, Bottom };

  PacingType() = default;

  static PacingType top() { return PacingType(Kind::Top); }
  static PacingType periodic() { return PacingType(Kind::Periodic); }
  static PacingType bottom() { return PacingType(Kind::Bottom); }
  static PacingType event(ActivationFormula f);
  static PacingType global(Rational period);
  static PacingType local(Rational period);
  static PacingType from_annotation(const PacingAnnotation& a);

  Kind kind() const { return kind_; }
  const ActivationFormula& formula() const { return formula_; }
  const Rational& period() const { return period_; }

  bool is_top() const { return kind_ == Kind::Top; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  bool is_concrete() const { return kind_ == Kind::Event || kind_ == Kind::Global || kind_ == Kind::Local; }

  std::string to_string(const std::function<std::string(std::uint32_t)>& input_name) const;

  friend bool operator==(const PacingType&, const PacingType&) = default;

 private:
  explicit PacingType(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Top;
  ActivationFormula formula_;
  Rational period_;
};

bool pt_le(const PacingType& a, const PacingType& b);
PacingType pt_meet(const PacingType& a, const PacingType& b);
PacingType pt_join(const PacingType& a, const PacingType& b);

struct StreamPacing {
  PacingType spawn = PacingType::top();
  PacingType eval = PacingType::top();
  PacingType close = PacingType::bottom();
};

struct PacingInfo {
  // Indexed by StreamId::value. Inputs carry Event(input) as eval pacing.
  std::vector<StreamPacing> streams;
  // Per expression id: evaluation, spawn and close slots.
  std::vector<PacingType> expr_eval;
  std::vector<PacingType> expr_spawn;
  std::vector<PacingType> expr_close;
};

struct PacingResult {
  PacingInfo info;
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

PacingResult infer_pacing(const Specification& spec);

}  // namespace lola
