#include "lola/parser.hpp"

#include <cctype>
#include <stdexcept>

namespace lola {
namespace {

enum class Tok {
  Ident,
  Int,
  Float,
  String,
  Quantity,
  LParen,
  RParen,
  Comma,
  Colon,
  Assign,
  At,
  Dot,
  Plus,
  Minus,
  Star,
  StarStar,
  Slash,
  Percent,
  Lt,
  Le,
  Gt,
  Ge,
  Eq,
  EqEq,
  Ne,
  Bang,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_unit(std::string_view u) {
  return u == "Hz" || u == "kHz" || u == "s" || u == "ms" || u == "us" || u == "ns" || u == "min" || u == "h";
}

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer literal";
    case Tok::Float: return "float literal";
    case Tok::String: return "string literal";
    case Tok::Quantity: return "quantity";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Assign: return "':='";
    case Tok::At: return "'@'";
    case Tok::Dot: return "'.'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::StarStar: return "'**'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::Bang: return "'!'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::End: return "end of input";
  }
  return "token";
}

class Lexer {
 public:
  Lexer(std::string_view src, Diagnostics& diags) : src_(src), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      std::size_t start = pos_;
      char c = src_[pos_];
      bool after_dot = !out.empty() && out.back().kind == Tok::Dot;
      if (is_ident_start(c)) {
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        out.push_back({Tok::Ident, std::string(src_.substr(start, pos_ - start)), {start, pos_}});
      } else if (is_digit(c)) {
        if (after_dot) {
          while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
          out.push_back({Tok::Int, std::string(src_.substr(start, pos_ - start)), {start, pos_}});
        } else {
          lex_number(out);
        }
      } else if (c == '"') {
        lex_string(out);
      } else {
        lex_punct(out);
      }
    }
    out.push_back({Tok::End, "", {src_.size(), src_.size()}});
    return out;
  }

 private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        std::size_t start = pos_;
        std::size_t close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) {
          diags_.push_back(error(DiagCode::LexicalError, {start, src_.size()}, "unterminated block comment"));
          pos_ = src_.size();
        } else {
          pos_ = close + 2;
        }
      } else {
        break;
      }
    }
  }

  void lex_number(std::vector<Token>& out) {
    std::size_t start = pos_;
    bool is_float = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      is_float = true;
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && is_digit(src_[p])) {
        is_float = true;
        pos_ = p;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
    }
    if (pos_ < src_.size() && is_ident_start(src_[pos_])) {
      std::size_t unit_start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
      std::string_view unit = src_.substr(unit_start, pos_ - unit_start);
      if (!is_unit(unit)) {
        diags_.push_back(error(DiagCode::LexicalError, {start, pos_},
                               "unknown unit '" + std::string(unit) + "' in quantity",
                               "supported units: Hz, kHz, s, ms, us, ns, min, h"));
        return;
      }
      out.push_back({Tok::Quantity, std::string(src_.substr(start, pos_ - start)), {start, pos_}});
      return;
    }
    out.push_back({is_float ? Tok::Float : Tok::Int, std::string(src_.substr(start, pos_ - start)), {start, pos_}});
  }

  void lex_string(std::vector<Token>& out) {
    std::size_t start = pos_++;
    std::string value;
    while (pos_ < src_.size() && src_[pos_] != '"') {
      char c = src_[pos_];
      if (c == '\n') break;
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char e = src_[pos_ + 1];
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default:
            diags_.push_back(error(DiagCode::LexicalError, {pos_, pos_ + 2}, "unknown escape sequence"));
            value += e;
        }
        pos_ += 2;
        continue;
      }
      value += c;
      ++pos_;
    }
    if (pos_ >= src_.size() || src_[pos_] != '"') {
      diags_.push_back(error(DiagCode::LexicalError, {start, pos_}, "unterminated string literal"));
      return;
    }
    ++pos_;
    out.push_back({Tok::String, std::move(value), {start, pos_}});
  }

  void lex_punct(std::vector<Token>& out) {
    std::size_t start = pos_;
    auto two = [&](char next) { return pos_ + 1 < src_.size() && src_[pos_ + 1] == next; };
    char c = src_[pos_];
    Tok kind;
    std::size_t len = 1;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '@': kind = Tok::At; break;
      case '.': kind = Tok::Dot; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '/': kind = Tok::Slash; break;
      case '%': kind = Tok::Percent; break;
      case ':':
        if (two('=')) {
          kind = Tok::Assign;
          len = 2;
        } else {
          kind = Tok::Colon;
        }
        break;
      case '*':
        if (two('*')) {
          kind = Tok::StarStar;
          len = 2;
        } else {
          kind = Tok::Star;
        }
        break;
      case '<':
        if (two('=')) {
          kind = Tok::Le;
          len = 2;
        } else {
          kind = Tok::Lt;
        }
        break;
      case '>':
        if (two('=')) {
          kind = Tok::Ge;
          len = 2;
        } else {
          kind = Tok::Gt;
        }
        break;
      case '=':
        if (two('=')) {
          kind = Tok::EqEq;
          len = 2;
        } else {
          kind = Tok::Eq;
        }
        break;
      case '!':
        if (two('=')) {
          kind = Tok::Ne;
          len = 2;
        } else {
          kind = Tok::Bang;
        }
        break;
      case '&':
        if (two('&')) {
          kind = Tok::AndAnd;
          len = 2;
          break;
        }
        [[fallthrough]];
      case '|':
        if (c == '|' && two('|')) {
          kind = Tok::OrOr;
          len = 2;
          break;
        }
        [[fallthrough]];
      default: {
        std::size_t end = pos_ + 1;
        // Keep multi-byte UTF-8 sequences together in the diagnostic.
        while (end < src_.size() && (static_cast<unsigned char>(src_[end]) & 0xC0) == 0x80) ++end;
        diags_.push_back(error(DiagCode::LexicalError, {start, end},
                               "unexpected character '" + std::string(src_.substr(start, end - start)) + "'"));
        pos_ = end;
        return;
      }
    }
    pos_ += len;
    out.push_back({kind, std::string(src_.substr(start, len)), {start, pos_}});
  }

  std::string_view src_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
};

struct SyntaxError {};

bool is_keyword(std::string_view s) {
  static constexpr std::string_view keywords[] = {"input", "output", "trigger", "constant", "import", "spawn",
                                                  "eval",  "close",  "when",    "with",     "if",     "then",
                                                  "else",  "and",    "or",      "not",      "true",   "false"};
  for (auto k : keywords) {
    if (s == k) return true;
  }
  return false;
}

bool is_decl_keyword(const Token& t) {
  return t.kind == Tok::Ident &&
         (t.text == "input" || t.text == "output" || t.text == "trigger" || t.text == "constant" || t.text == "import");
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, Diagnostics& diags) : toks_(std::move(tokens)), diags_(diags) {}

  SurfaceSpec run() {
    SurfaceSpec spec;
    while (peek().kind != Tok::End) {
      std::size_t before = pos_;
      try {
        spec.declarations.push_back(declaration());
      } catch (const SyntaxError&) {
        if (pos_ == before) ++pos_;
        while (peek().kind != Tok::End && !is_decl_keyword(peek())) ++pos_;
      }
    }
    return spec;
  }

 private:
  static constexpr int kMaxDepth = 200;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    last_end_ = t.span.end;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!at_word(w)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) {
    const Token& t = peek();
    if (t.kind == Tok::End) {
      diags_.push_back(error(DiagCode::UnexpectedEnd, t.span, "unexpected end of input, expected " + expected));
    } else if (t.kind == Tok::RParen) {
      diags_.push_back(error(DiagCode::UnbalancedDelimiter, t.span, "unmatched ')', expected " + expected));
    } else {
      std::string shown = t.kind == Tok::Ident ? "'" + t.text + "'" : std::string(describe(t.kind));
      diags_.push_back(error(DiagCode::UnexpectedToken, t.span, "unexpected " + shown + ", expected " + expected));
    }
    throw SyntaxError{};
  }

  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return advance();
  }

  void expect_close(Span open) {
    if (at(Tok::RParen)) {
      advance();
      return;
    }
    if (at(Tok::End)) {
      diags_.push_back(error(DiagCode::UnbalancedDelimiter, open, "unclosed '('"));
      throw SyntaxError{};
    }
    fail("')'");
  }

  std::string identifier(const std::string& what) {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail(what);
    return advance().text;
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) {
        p.diags_.push_back(error(DiagCode::UnexpectedToken, p.peek().span, "expression nesting too deep"));
        throw SyntaxError{};
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  SurfaceDecl declaration() {
    std::size_t start = peek().span.begin;
    if (accept_word("import")) {
      SurfaceImport imp;
      imp.name = identifier("module name");
      imp.span = {start, last_end_};
      return imp;
    }
    if (accept_word("input")) {
      SurfaceInput in;
      in.name = identifier("input stream name");
      if (accept(Tok::Colon)) in.type = type();
      in.span = {start, last_end_};
      return in;
    }
    if (accept_word("constant")) {
      SurfaceConstant c;
      c.name = identifier("constant name");
      expect(Tok::Colon, "':' and a type");
      c.type = type();
      expect(Tok::Assign, "':='");
      c.value = expression();
      c.span = {start, last_end_};
      return c;
    }
    if (accept_word("output")) return stream(false, start);
    if (accept_word("trigger")) return stream(true, start);
    fail("a declaration (input, output, trigger, constant or import)");
  }

  SurfaceType type() {
    DepthGuard guard(*this);
    SurfaceType t;
    std::size_t start = peek().span.begin;
    if (at(Tok::LParen)) {
      Span open = advance().span;
      if (!at(Tok::RParen)) {
        t.elements.push_back(type());
        while (accept(Tok::Comma)) t.elements.push_back(type());
      }
      expect_close(open);
    } else {
      t.name = identifier("a type");
    }
    t.span = {start, last_end_};
    return t;
  }

  std::vector<SurfaceParam> param_list() {
    Span open = expect(Tok::LParen, "'('").span;
    std::vector<SurfaceParam> params;
    if (!at(Tok::RParen)) {
      do {
        SurfaceParam p;
        std::size_t start = peek().span.begin;
        p.name = identifier("parameter name");
        if (accept(Tok::Colon)) p.type = type();
        p.span = {start, last_end_};
        params.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect_close(open);
    return params;
  }

  bool at_clause_keyword(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && (t.text == "spawn" || t.text == "eval" || t.text == "close");
  }

  // For `trigger (` decide between a parameter list and a parenthesized expression.
  bool trigger_has_params() const {
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      if (toks_[i].kind == Tok::LParen) ++depth;
      if (toks_[i].kind == Tok::RParen && --depth == 0) {
        const Token& next = i + 1 < toks_.size() ? toks_[i + 1] : toks_.back();
        return next.kind == Tok::Ident && (next.text == "spawn" || next.text == "eval" || next.text == "close");
      }
      if (toks_[i].kind == Tok::End) return false;
    }
    return false;
  }

  SurfaceStream stream(bool trigger, std::size_t start) {
    SurfaceStream s;
    s.is_trigger = trigger;
    if (!trigger) {
      s.name_span = peek().span;
      s.name = identifier("output stream name");
      if (at(Tok::LParen)) {
        s.has_param_list = true;
        s.params = param_list();
      }
      if (accept(Tok::Colon)) s.type = type();
    } else if (at(Tok::LParen) && trigger_has_params()) {
      s.has_param_list = true;
      s.params = param_list();
    }
    s.name_span = s.name.empty() ? Span{start, last_end_} : s.name_span;

    if (trigger && !at_clause_keyword()) {
      SurfaceClause clause;
      std::size_t cstart = peek().span.begin;
      if (at(Tok::At)) clause.pacing = pacing();
      clause.when = expression();
      if (at(Tok::String)) clause.with = primary();
      clause.span = {cstart, last_end_};
      s.eval = std::move(clause);
      s.span = {start, last_end_};
      return s;
    }

    if (!trigger && (at(Tok::At) || at(Tok::Assign))) {
      SurfaceClause clause;
      std::size_t cstart = peek().span.begin;
      if (at(Tok::At)) clause.pacing = pacing();
      expect(Tok::Assign, "':=' after the pacing annotation");
      clause.with = expression();
      clause.span = {cstart, last_end_};
      s.eval = std::move(clause);
      s.span = {start, last_end_};
      return s;
    }

    while (at_clause_keyword()) {
      const Token& kw = advance();
      std::string which = kw.text;
      Span kw_span = kw.span;
      SurfaceClause clause;
      if (at(Tok::At)) clause.pacing = pacing();
      if (accept_word("when")) clause.when = expression();
      if (at_word("with")) {
        if (which == "close") {
          diags_.push_back(error(DiagCode::UnexpectedToken, peek().span, "close clauses take no 'with' expression"));
          throw SyntaxError{};
        }
        advance();
        clause.with = expression();
      }
      clause.span = {kw_span.begin, last_end_};
      std::optional<SurfaceClause>& slot = which == "spawn" ? s.spawn : which == "eval" ? s.eval : s.close;
      if (slot) {
        diags_.push_back(error(DiagCode::UnexpectedToken, kw_span, "duplicate " + which + " clause"));
        throw SyntaxError{};
      }
      slot = std::move(clause);
    }
    if (!s.spawn && !s.eval && !s.close) fail("':=' or a spawn/eval/close clause");
    s.span = {start, last_end_};
    return s;
  }

  SurfacePacing pacing() {
    SurfacePacing p;
    std::size_t start = expect(Tok::At, "'@'").span.begin;
    if (at(Tok::Quantity)) {
      p.kind = SurfacePacing::Kind::Frequency;
      p.quantity = advance().text;
    } else if ((at_word("Global") || at_word("Local")) && peek(1).kind == Tok::LParen) {
      p.kind = at_word("Global") ? SurfacePacing::Kind::Global : SurfacePacing::Kind::Local;
      advance();
      Span open = advance().span;
      p.quantity = expect(Tok::Quantity, "a frequency or period such as 1Hz or 10s").text;
      expect_close(open);
    } else {
      p.kind = SurfacePacing::Kind::Activation;
      p.activation = activation_or();
    }
    accept(Tok::At);
    p.span = {start, last_end_};
    return p;
  }

  SurfaceActivation activation_or() {
    DepthGuard guard(*this);
    std::size_t start = peek().span.begin;
    SurfaceActivation first = activation_and();
    if (!(at(Tok::OrOr) || at_word("or"))) return first;
    SurfaceActivation node;
    node.kind = SurfaceActivation::Kind::Or;
    node.operands.push_back(std::move(first));
    while (accept(Tok::OrOr) || accept_word("or")) node.operands.push_back(activation_and());
    node.span = {start, last_end_};
    return node;
  }

  SurfaceActivation activation_and() {
    std::size_t start = peek().span.begin;
    SurfaceActivation first = activation_atom();
    if (!(at(Tok::AndAnd) || at_word("and"))) return first;
    SurfaceActivation node;
    node.kind = SurfaceActivation::Kind::And;
    node.operands.push_back(std::move(first));
    while (accept(Tok::AndAnd) || accept_word("and")) node.operands.push_back(activation_atom());
    node.span = {start, last_end_};
    return node;
  }

  SurfaceActivation activation_atom() {
    SurfaceActivation a;
    std::size_t start = peek().span.begin;
    if (at(Tok::LParen)) {
      Span open = advance().span;
      a = activation_or();
      expect_close(open);
      return a;
    }
    if (accept_word("true")) {
      a.kind = SurfaceActivation::Kind::True;
    } else {
      a.kind = SurfaceActivation::Kind::Name;
      a.name = identifier("an input stream name, 'true' or a frequency");
    }
    a.span = {start, last_end_};
    return a;
  }

  SurfaceExpr make_binary(BinaryOp op, SurfaceExpr lhs, SurfaceExpr rhs) {
    SurfaceExpr e;
    e.kind = SurfaceExpr::Kind::Binary;
    e.binary = op;
    e.span = cover(lhs.span, rhs.span);
    e.operands.push_back(std::move(lhs));
    e.operands.push_back(std::move(rhs));
    return e;
  }

 public:
  SurfaceExpr expression() {
    DepthGuard guard(*this);
    if (at_word("if")) return if_expression();
    return or_expr();
  }

 private:
  SurfaceExpr if_expression() {
    std::size_t start = advance().span.begin;
    SurfaceExpr e;
    e.kind = SurfaceExpr::Kind::If;
    e.operands.push_back(expression());
    if (!accept_word("then")) fail("'then'");
    e.operands.push_back(expression());
    if (!accept_word("else")) fail("'else'");
    e.operands.push_back(expression());
    e.span = {start, last_end_};
    return e;
  }

  SurfaceExpr or_expr() {
    SurfaceExpr lhs = and_expr();
    while (at(Tok::OrOr) || at_word("or")) {
      advance();
      lhs = make_binary(BinaryOp::Or, std::move(lhs), and_expr());
    }
    return lhs;
  }

  SurfaceExpr and_expr() {
    SurfaceExpr lhs = comparison();
    while (at(Tok::AndAnd) || at_word("and")) {
      advance();
      lhs = make_binary(BinaryOp::And, std::move(lhs), comparison());
    }
    return lhs;
  }

  SurfaceExpr comparison() {
    SurfaceExpr lhs = additive();
    while (true) {
      BinaryOp op;
      switch (peek().kind) {
        case Tok::Lt: op = BinaryOp::Lt; break;
        case Tok::Le: op = BinaryOp::Le; break;
        case Tok::Gt: op = BinaryOp::Gt; break;
        case Tok::Ge: op = BinaryOp::Ge; break;
        case Tok::Eq:
        case Tok::EqEq: op = BinaryOp::Eq; break;
        case Tok::Ne: op = BinaryOp::Ne; break;
        default: return lhs;
      }
      advance();
      lhs = make_binary(op, std::move(lhs), additive());
    }
  }

  SurfaceExpr additive() {
    SurfaceExpr lhs = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = advance().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, std::move(lhs), multiplicative());
    }
    return lhs;
  }

  SurfaceExpr multiplicative() {
    SurfaceExpr lhs = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      Tok k = advance().kind;
      BinaryOp op = k == Tok::Star ? BinaryOp::Mul : k == Tok::Slash ? BinaryOp::Div : BinaryOp::Mod;
      lhs = make_binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  SurfaceExpr unary() {
    DepthGuard guard(*this);
    if (at(Tok::Minus) || at(Tok::Bang) || at_word("not")) {
      const Token& t = advance();
      std::size_t start = t.span.begin;
      SurfaceExpr e;
      e.kind = SurfaceExpr::Kind::Unary;
      e.unary = t.kind == Tok::Minus ? UnaryOp::Neg : UnaryOp::Not;
      e.operands.push_back(unary());
      e.span = {start, last_end_};
      return e;
    }
    return power();
  }

  SurfaceExpr power() {
    SurfaceExpr base = postfix();
    if (accept(Tok::StarStar)) return make_binary(BinaryOp::Pow, std::move(base), unary());
    return base;
  }

  void arguments(SurfaceExpr& e) {
    Span open = expect(Tok::LParen, "'('").span;
    if (!at(Tok::RParen)) {
      do {
        std::string label;
        if (at(Tok::Ident) && peek(1).kind == Tok::Colon) {
          label = advance().text;
          advance();
        }
        e.labels.push_back(std::move(label));
        e.operands.push_back(expression());
      } while (accept(Tok::Comma));
    }
    expect_close(open);
  }

  SurfaceExpr postfix() {
    SurfaceExpr e = primary();
    while (at(Tok::Dot)) {
      advance();
      std::size_t start = e.span.begin;
      if (at(Tok::Int)) {
        SurfaceExpr f;
        f.kind = SurfaceExpr::Kind::Field;
        const Token& idx = advance();
        if (idx.text.size() > 6) {
          diags_.push_back(error(DiagCode::UnexpectedToken, idx.span, "tuple index too large"));
          throw SyntaxError{};
        }
        f.index = std::stoul(idx.text);
        f.operands.push_back(std::move(e));
        f.span = {start, last_end_};
        e = std::move(f);
        continue;
      }
      SurfaceExpr m;
      m.kind = SurfaceExpr::Kind::Method;
      m.text = identifier("a method name or tuple index");
      m.operands.push_back(std::move(e));
      m.labels.push_back("");
      arguments(m);
      m.span = {start, last_end_};
      e = std::move(m);
    }
    return e;
  }

 public:
  SurfaceExpr primary() {
    DepthGuard guard(*this);
    SurfaceExpr e;
    const Token& t = peek();
    std::size_t start = t.span.begin;
    switch (t.kind) {
      case Tok::Int:
        e.kind = SurfaceExpr::Kind::Int;
        e.text = advance().text;
        break;
      case Tok::Float:
        e.kind = SurfaceExpr::Kind::Float;
        e.text = advance().text;
        break;
      case Tok::String:
        e.kind = SurfaceExpr::Kind::String;
        e.text = advance().text;
        break;
      case Tok::Quantity:
        e.kind = SurfaceExpr::Kind::Quantity;
        e.text = advance().text;
        break;
      case Tok::LParen: {
        Span open = advance().span;
        if (at(Tok::RParen)) {
          advance();
          e.kind = SurfaceExpr::Kind::Tuple;
          break;
        }
        SurfaceExpr first = expression();
        if (!at(Tok::Comma)) {
          expect_close(open);
          return first;
        }
        e.kind = SurfaceExpr::Kind::Tuple;
        e.operands.push_back(std::move(first));
        while (accept(Tok::Comma)) e.operands.push_back(expression());
        expect_close(open);
        break;
      }
      case Tok::Ident: {
        if (t.text == "true" || t.text == "false") {
          e.kind = SurfaceExpr::Kind::Bool;
          e.text = advance().text;
          break;
        }
        if (t.text == "if") return if_expression();
        if (t.text == "cast" && peek(1).kind == Tok::Lt) {
          advance();
          advance();
          e.kind = SurfaceExpr::Kind::Cast;
          e.types.push_back(type());
          expect(Tok::Comma, "','");
          e.types.push_back(type());
          expect(Tok::Gt, "'>'");
          Span open = expect(Tok::LParen, "'('").span;
          e.operands.push_back(expression());
          expect_close(open);
          break;
        }
        std::string name = identifier("an expression");
        if (at(Tok::LParen)) {
          e.kind = SurfaceExpr::Kind::Call;
          e.text = std::move(name);
          arguments(e);
        } else {
          e.kind = SurfaceExpr::Kind::Name;
          e.text = std::move(name);
        }
        break;
      }
      default:
        fail("an expression");
    }
    e.span = {start, last_end_};
    return e;
  }

 private:
  std::vector<Token> toks_;
  Diagnostics& diags_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  int depth_ = 0;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult result;
  Lexer lexer(source, result.diagnostics);
  std::vector<Token> tokens = lexer.run();
  Parser parser(std::move(tokens), result.diagnostics);
  result.spec = parser.run();
  sort_by_position(result.diagnostics);
  return result;
}

}  // namespace lola
