#pragma once

#include <string>
#include <vector>

#include "lola/ast.hpp"
#include "lola/pacing.hpp"

namespace lola {

// A boolean stream expression refining a pacing type, kept as the set of its
// top-level conjuncts in canonical form. Expr(A) ⊑ Expr(B) iff A ⊇ B, which
// soundly approximates "B implies A" over all traces.
class SemanticType {
 public:
  enum class Kind { Top, Bottom, Expr };

  struct Conjunct {
    std::string key;
    std::string text;
  };

  SemanticType() = default;
  static SemanticType top() { return SemanticType(Kind::Top); }
  static SemanticType bottom() { return SemanticType(Kind::Bottom); }
  // Literal true yields Top and a literal false conjunct yields Bottom.
  static SemanticType from_expression(const Expression& e, const Specification& spec, const OutputStream* self);
  // Builds a type from raw conjunct keys; rendering reuses the key.
  static SemanticType from_keys(std::vector<std::string> keys);
  static SemanticType from_conjuncts(std::vector<Conjunct> conjuncts);

  Kind kind() const { return kind_; }
  bool is_top() const { return kind_ == Kind::Top; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  const std::vector<Conjunct>& conjuncts() const { return conjuncts_; }
  std::string to_string() const;

  friend bool operator==(const SemanticType& a, const SemanticType& b);

 private:
  explicit SemanticType(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Top;
  std::vector<Conjunct> conjuncts_;
};

bool st_le(const SemanticType& a, const SemanticType& b);
SemanticType st_meet(const SemanticType& a, const SemanticType& b);
SemanticType st_join(const SemanticType& a, const SemanticType& b);

struct SemanticTriple {
  SemanticType spawn = SemanticType::top();
  SemanticType eval = SemanticType::top();
  SemanticType close = SemanticType::bottom();
};

// Parameter equality: parameter i of stream a and parameter j of stream b are
// related iff their spawn-with expressions are structurally identical.
class ParamEqRelation {
 public:
  explicit ParamEqRelation(const Specification& spec);

  bool related(StreamId a, std::size_t i, StreamId b, std::size_t j) const;
  std::vector<std::pair<std::size_t, std::size_t>> pairs(StreamId a, StreamId b) const;

 private:
  const Specification* spec_;
  // Interned structural key per output and spawn-with element.
  std::vector<std::vector<std::size_t>> keys_;
};

inline ParamEqRelation compute_param_eq(const Specification& spec) { return ParamEqRelation(spec); }

struct SemanticResult {
  // Indexed by StreamId::value; inputs are (Top, Top, Bottom).
  std::vector<SemanticTriple> streams;
  Diagnostics diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

SemanticResult check_semantic_types(const Specification& spec, const PacingInfo& pacing);

}  // namespace lola
