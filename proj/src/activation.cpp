#include "lola/activation.hpp"

#include <algorithm>

namespace lola {
namespace {

bool contains(const ActivationFormula::Clause& big, const ActivationFormula::Clause& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

ActivationFormula ActivationFormula::input(std::uint32_t index) {
  ActivationFormula f;
  f.clauses_.push_back({index});
  return f;
}

ActivationFormula ActivationFormula::any_of(std::uint32_t count) {
  ActivationFormula f;
  for (std::uint32_t i = 0; i < count; ++i) f.clauses_.push_back({i});
  return f;
}

ActivationFormula ActivationFormula::from_clauses(std::vector<Clause> clauses) {
  ActivationFormula f;
  f.clauses_ = std::move(clauses);
  f.normalize();
  return f;
}

void ActivationFormula::normalize() {
  for (auto& c : clauses_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::sort(clauses_.begin(), clauses_.end(),
            [](const Clause& a, const Clause& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
  std::vector<Clause> minimal;
  for (auto& c : clauses_) {
    bool absorbed = std::any_of(minimal.begin(), minimal.end(), [&](const Clause& m) { return contains(c, m); });
    if (!absorbed) minimal.push_back(std::move(c));
  }
  std::sort(minimal.begin(), minimal.end());
  clauses_ = std::move(minimal);
}

ActivationFormula operator&&(const ActivationFormula& a, const ActivationFormula& b) {
  std::vector<ActivationFormula::Clause> product;
  for (const auto& x : a.clauses_) {
    for (const auto& y : b.clauses_) {
      ActivationFormula::Clause merged;
      std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(merged));
      product.push_back(std::move(merged));
    }
  }
  return ActivationFormula::from_clauses(std::move(product));
}

ActivationFormula operator||(const ActivationFormula& a, const ActivationFormula& b) {
  std::vector<ActivationFormula::Clause> all = a.clauses_;
  all.insert(all.end(), b.clauses_.begin(), b.clauses_.end());
  return ActivationFormula::from_clauses(std::move(all));
}

bool ActivationFormula::implies(const ActivationFormula& other) const {
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
    return std::any_of(other.clauses_.begin(), other.clauses_.end(), [&](const Clause& d) { return contains(c, d); });
  });
}

bool ActivationFormula::holds(const std::function<bool(std::uint32_t)>& has_value) const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [&](const Clause& c) { return std::all_of(c.begin(), c.end(), has_value); });
}

std::vector<std::uint32_t> ActivationFormula::inputs() const {
  std::vector<std::uint32_t> out;
  for (const auto& c : clauses_) out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string ActivationFormula::to_string(const std::function<std::string(std::uint32_t)>& name) const {
  if (clauses_.empty()) return "false";
  std::string out;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i) out += " || ";
    const Clause& c = clauses_[i];
    bool wrap = c.size() > 1 && clauses_.size() > 1;
    if (wrap) out += "(";
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j) out += " && ";
      out += name(c[j]);
    }
    if (wrap) out += ")";
  }
  return out;
}

}  // namespace lola
