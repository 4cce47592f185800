#include "lola/parser.hpp"

namespace lola {
namespace {

std::string_view symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Pow: return "**";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string print_type(const SurfaceType& t) {
  if (!t.name.empty()) return t.name;
  std::string out = "(";
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    if (i) out += ", ";
    out += print_type(t.elements[i]);
  }
  return out + ")";
}

std::string print_activation(const SurfaceActivation& a) {
  switch (a.kind) {
    case SurfaceActivation::Kind::Name: return a.name;
    case SurfaceActivation::Kind::True: return "true";
    case SurfaceActivation::Kind::And:
    case SurfaceActivation::Kind::Or: {
      std::string sep = a.kind == SurfaceActivation::Kind::And ? " && " : " || ";
      std::string out;
      for (std::size_t i = 0; i < a.operands.size(); ++i) {
        if (i) out += sep;
        const auto& op = a.operands[i];
        bool nested = op.kind == SurfaceActivation::Kind::And || op.kind == SurfaceActivation::Kind::Or;
        out += nested ? "(" + print_activation(op) + ")" : print_activation(op);
      }
      return out;
    }
  }
  return "";
}

std::string print_pacing(const SurfacePacing& p) {
  switch (p.kind) {
    case SurfacePacing::Kind::Frequency: return "@" + p.quantity + "@";
    case SurfacePacing::Kind::Global: return "@Global(" + p.quantity + ")@";
    case SurfacePacing::Kind::Local: return "@Local(" + p.quantity + ")@";
    case SurfacePacing::Kind::Activation: return "@" + print_activation(p.activation) + "@";
  }
  return "";
}

std::string print_arguments(const SurfaceExpr& e, std::size_t first) {
  std::string out = "(";
  for (std::size_t i = first; i < e.operands.size(); ++i) {
    if (i > first) out += ", ";
    const std::string& label = e.labels[i];
    if (!label.empty()) out += label + ": ";
    out += print_expression(e.operands[i]);
  }
  return out + ")";
}

std::string print_clause(std::string_view keyword, const SurfaceClause& c) {
  std::string out = "    ";
  out += keyword;
  if (c.pacing) out += " " + print_pacing(*c.pacing);
  if (c.when) out += " when " + print_expression(*c.when);
  if (c.with) out += " with " + print_expression(*c.with);
  return out + "\n";
}

std::string print_params(const std::vector<SurfaceParam>& params) {
  std::string out = "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].name;
    if (params[i].type) out += ": " + print_type(*params[i].type);
  }
  return out + ")";
}

struct DeclPrinter {
  std::string& out;

  void operator()(const SurfaceImport& d) { out += "import " + d.name + "\n"; }
  void operator()(const SurfaceInput& d) {
    out += "input " + d.name;
    if (d.type) out += ": " + print_type(*d.type);
    out += "\n";
  }
  void operator()(const SurfaceConstant& d) {
    out += "constant " + d.name + ": " + print_type(d.type) + " := " + print_expression(d.value) + "\n";
  }
  void operator()(const SurfaceStream& d) {
    out += d.is_trigger ? "trigger" : "output " + d.name;
    if (d.has_param_list) out += print_params(d.params);
    if (d.type) out += ": " + print_type(*d.type);
    out += "\n";
    if (d.spawn) out += print_clause("spawn", *d.spawn);
    if (d.eval) out += print_clause("eval", *d.eval);
    if (d.close) out += print_clause("close", *d.close);
  }
};

bool equal_types(const SurfaceType& a, const SurfaceType& b) {
  if (a.name != b.name || a.elements.size() != b.elements.size()) return false;
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (!equal_types(a.elements[i], b.elements[i])) return false;
  }
  return true;
}

bool equal_opt_types(const std::optional<SurfaceType>& a, const std::optional<SurfaceType>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || equal_types(*a, *b);
}

bool equal_activations(const SurfaceActivation& a, const SurfaceActivation& b) {
  if (a.kind != b.kind || a.name != b.name || a.operands.size() != b.operands.size()) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    if (!equal_activations(a.operands[i], b.operands[i])) return false;
  }
  return true;
}

bool equal_pacings(const std::optional<SurfacePacing>& a, const std::optional<SurfacePacing>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->kind == b->kind && a->quantity == b->quantity && equal_activations(a->activation, b->activation);
}

bool equal_opt_exprs(const std::optional<SurfaceExpr>& a, const std::optional<SurfaceExpr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || structurally_equal(*a, *b);
}

bool equal_clauses(const std::optional<SurfaceClause>& a, const std::optional<SurfaceClause>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return equal_pacings(a->pacing, b->pacing) && equal_opt_exprs(a->when, b->when) && equal_opt_exprs(a->with, b->with);
}

struct DeclEqual {
  const SurfaceDecl& other;

  bool operator()(const SurfaceImport& a) const { return std::get<SurfaceImport>(other).name == a.name; }
  bool operator()(const SurfaceInput& a) const {
    const auto& b = std::get<SurfaceInput>(other);
    return a.name == b.name && equal_opt_types(a.type, b.type);
  }
  bool operator()(const SurfaceConstant& a) const {
    const auto& b = std::get<SurfaceConstant>(other);
    return a.name == b.name && equal_types(a.type, b.type) && structurally_equal(a.value, b.value);
  }
  bool operator()(const SurfaceStream& a) const {
    const auto& b = std::get<SurfaceStream>(other);
    if (a.is_trigger != b.is_trigger || a.name != b.name || a.has_param_list != b.has_param_list) return false;
    if (a.params.size() != b.params.size() || !equal_opt_types(a.type, b.type)) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      if (a.params[i].name != b.params[i].name || !equal_opt_types(a.params[i].type, b.params[i].type)) return false;
    }
    return equal_clauses(a.spawn, b.spawn) && equal_clauses(a.eval, b.eval) && equal_clauses(a.close, b.close);
  }
};

}  // namespace

std::string print_expression(const SurfaceExpr& e) {
  using K = SurfaceExpr::Kind;
  switch (e.kind) {
    case K::Int:
    case K::Float:
    case K::Bool:
    case K::Quantity:
    case K::Name:
      return e.text;
    case K::String:
      return quote(e.text);
    case K::Call:
      return e.text + print_arguments(e, 0);
    case K::Method:
      return print_expression(e.operands[0]) + "." + e.text + print_arguments(e, 1);
    case K::Field:
      return print_expression(e.operands[0]) + "." + std::to_string(e.index);
    case K::Unary:
      return std::string("(") + (e.unary == UnaryOp::Neg ? "-" : "!") + print_expression(e.operands[0]) + ")";
    case K::Binary:
      return "(" + print_expression(e.operands[0]) + " " + std::string(symbol(e.binary)) + " " +
             print_expression(e.operands[1]) + ")";
    case K::If:
      return "(if " + print_expression(e.operands[0]) + " then " + print_expression(e.operands[1]) + " else " +
             print_expression(e.operands[2]) + ")";
    case K::Tuple: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.operands.size(); ++i) {
        if (i) out += ", ";
        out += print_expression(e.operands[i]);
      }
      return out + ")";
    }
    case K::Cast:
      return "cast<" + print_type(e.types[0]) + ", " + print_type(e.types[1]) + ">(" + print_expression(e.operands[0]) +
             ")";
  }
  return "";
}

std::string roundtrip_print(const SurfaceSpec& spec) {
  std::string out;
  DeclPrinter printer{out};
  for (const auto& d : spec.declarations) std::visit(printer, d);
  return out;
}

bool structurally_equal(const SurfaceExpr& a, const SurfaceExpr& b) {
  if (a.kind != b.kind || a.text != b.text || a.index != b.index) return false;
  if (a.kind == SurfaceExpr::Kind::Unary && a.unary != b.unary) return false;
  if (a.kind == SurfaceExpr::Kind::Binary && a.binary != b.binary) return false;
  if (a.operands.size() != b.operands.size() || a.labels != b.labels || a.types.size() != b.types.size()) return false;
  for (std::size_t i = 0; i < a.types.size(); ++i) {
    if (!equal_types(a.types[i], b.types[i])) return false;
  }
  for (std::size_t i = 0; i < a.operands.size(); ++i) {
    if (!structurally_equal(a.operands[i], b.operands[i])) return false;
  }
  return true;
}

bool structurally_equal(const SurfaceSpec& a, const SurfaceSpec& b) {
  if (a.declarations.size() != b.declarations.size()) return false;
  for (std::size_t i = 0; i < a.declarations.size(); ++i) {
    if (a.declarations[i].index() != b.declarations[i].index()) return false;
    if (!std::visit(DeclEqual{b.declarations[i]}, a.declarations[i])) return false;
  }
  return true;
}

}  // namespace lola
