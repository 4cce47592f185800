#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lola {

// Positive boolean formula over input indices, kept as a minimal disjunctive
// normal form: a set of clauses, each a sorted set of inputs, with no clause
// containing another. For positive formulas this form is canonical, so
// logically equivalent formulas compare equal.
class ActivationFormula {
 public:
  using Clause = std::vector<std::uint32_t>;

  ActivationFormula() = default;

  static ActivationFormula input(std::uint32_t index);
  // Disjunction of all inputs 0..count-1: "some input has a fresh value".
  static ActivationFormula any_of(std::uint32_t count);
  static ActivationFormula from_clauses(std::vector<Clause> clauses);

  const std::vector<Clause>& clauses() const { return clauses_; }
  // The unsatisfiable formula; never produced from source text.
  bool is_false() const { return clauses_.empty(); }

  friend ActivationFormula operator&&(const ActivationFormula& a, const ActivationFormula& b);
  friend ActivationFormula operator||(const ActivationFormula& a, const ActivationFormula& b);
  friend bool operator==(const ActivationFormula&, const ActivationFormula&) = default;
  friend auto operator<=>(const ActivationFormula&, const ActivationFormula&) = default;

  // a implies b, decided exactly: every clause of a contains some clause of b.
  bool implies(const ActivationFormula& other) const;
  bool holds(const std::function<bool(std::uint32_t)>& has_value) const;
  // Inputs mentioned anywhere in the formula, sorted.
  std::vector<std::uint32_t> inputs() const;

  std::string to_string(const std::function<std::string(std::uint32_t)>& name) const;

 private:
  void normalize();

  std::vector<Clause> clauses_;
};

}  // namespace lola
