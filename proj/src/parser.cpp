#include <cctype>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "gcdk/frontend.hpp"

namespace gcdk::frontend {
namespace {

enum class Tok {
  Id, Nat, LBrace, RBrace, LParen, RParen, LBrack, RBrack,
  Semi, Colon, Comma, Tilde, Amp, Pipe, Arrow, DArrow,
  Eq, Neq, Le, Ge, End
};

struct Token {
  Tok k;
  std::string text;
  int line, col;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "sig", "phi", "db", "pfd", "unary", "binary", "key", "const",
      "true", "false", "forall", "exists", "x", "y", "P"};
  return kw;
}

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= s_.size()) return {Tok::End, "", line, col};
    char c = s_[pos_];
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_'))
        advance();
      return {Tok::Id, s_.substr(start, pos_ - start), line, col};
    }
    if (std::isdigit((unsigned char)c)) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) advance();
      return {Tok::Nat, s_.substr(start, pos_ - start), line, col};
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
    };
    if (two('<', '-') && pos_ + 2 < s_.size() && s_[pos_ + 2] == '>') {
      advance(); advance(); advance();
      return {Tok::DArrow, "<->", line, col};
    }
    if (two('-', '>')) { advance(); advance(); return {Tok::Arrow, "->", line, col}; }
    if (two('<', '=')) { advance(); advance(); return {Tok::Le, "<=", line, col}; }
    if (two('>', '=')) { advance(); advance(); return {Tok::Ge, ">=", line, col}; }
    if (two('!', '=')) { advance(); advance(); return {Tok::Neq, "!=", line, col}; }
    advance();
    switch (c) {
      case '{': return {Tok::LBrace, "{", line, col};
      case '}': return {Tok::RBrace, "}", line, col};
      case '(': return {Tok::LParen, "(", line, col};
      case ')': return {Tok::RParen, ")", line, col};
      case '[': return {Tok::LBrack, "[", line, col};
      case ']': return {Tok::RBrack, "]", line, col};
      case ';': return {Tok::Semi, ";", line, col};
      case ':': return {Tok::Colon, ":", line, col};
      case ',': return {Tok::Comma, ",", line, col};
      case '~': return {Tok::Tilde, "~", line, col};
      case '&': return {Tok::Amp, "&", line, col};
      case '|': return {Tok::Pipe, "|", line, col};
      case '=': return {Tok::Eq, "=", line, col};
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (s_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
    ++pos_;
  }
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { bump(); }

  Problem run() {
    parse_sig();
    parse_phi();
    parse_db();
    parse_pfd();
    expect(Tok::End, "end of input");
    return std::move(p_);
  }

 private:
  Lexer lex_;
  Token tok_;
  Problem p_;

  void bump() { tok_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(tok_.line, tok_.col, msg);
  }

  void expect(Tok k, const std::string& what) {
    if (tok_.k != k) fail("expected " + what);
    if (k != Tok::End) bump();
  }

  bool accept(Tok k) {
    if (tok_.k != k) return false;
    bump();
    return true;
  }

  bool at_kw(std::string_view kw) const {
    return tok_.k == Tok::Id && tok_.text == kw;
  }

  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail("expected '" + std::string(kw) + "'");
    bump();
  }

  std::string take_id() {
    if (tok_.k != Tok::Id) fail("expected identifier");
    std::string s = tok_.text;
    bump();
    return s;
  }

  std::string take_decl_id() {
    Token at = tok_;
    std::string s = take_id();
    if (keywords().count(s))
      throw ParseError(at.line, at.col, "'" + s + "' is a reserved word");
    if (s.ends_with("_inv"))
      throw ParseError(at.line, at.col, "'_inv' suffix is reserved for converses");
    if (p_.sig.unary_id(s) >= 0 || p_.sig.binary_id(s) >= 0 ||
        p_.sig.const_id(s) >= 0)
      throw ParseError(at.line, at.col, "duplicate declaration of '" + s + "'");
    return s;
  }

  // --- sig block ---

  void parse_sig() {
    expect_kw("sig");
    expect(Tok::LBrace, "'{'");
    if (at_kw("unary")) {
      bump();
      do p_.sig.add_unary(take_decl_id()); while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
    }
    if (at_kw("binary")) {
      bump();
      do p_.sig.add_binary(take_decl_id()); while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
    }
    if (at_kw("key")) {
      bump();
      do p_.sig.add_key(take_decl_id()); while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
    }
    if (at_kw("const")) {
      bump();
      do p_.sig.add_const(take_decl_id()); while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
    }
    expect(Tok::RBrace, "'}'");
  }

  // --- phi block ---

  void parse_phi() {
    expect_kw("phi");
    expect(Tok::Colon, "':'");
    p_.phi = parse_formula();
    expect(Tok::Semi, "';'");
  }

  F parse_formula() { return parse_iff(); }

  F parse_iff() {
    F l = parse_imp();
    if (accept(Tok::DArrow)) return mk_iff(l, parse_iff());
    return l;
  }

  F parse_imp() {
    F l = parse_or();
    if (accept(Tok::Arrow)) return mk_imp(l, parse_imp());
    return l;
  }

  F parse_or() {
    F l = parse_and();
    while (accept(Tok::Pipe)) l = mk_or(l, parse_and());
    return l;
  }

  F parse_and() {
    F l = parse_neg();
    while (accept(Tok::Amp)) l = mk_and(l, parse_neg());
    return l;
  }

  F parse_neg() {
    if (accept(Tok::Tilde)) return mk_not(parse_neg());
    return parse_primary();
  }

  int parse_var() {
    Token at = tok_;
    std::string v = take_id();
    if (v == "x") return VarX;
    if (v == "y") return VarY;
    throw ParseError(at.line, at.col, "expected variable x or y");
  }

  F parse_primary() {
    if (at_kw("true")) { bump(); return mk_true(); }
    if (at_kw("false")) { bump(); return mk_false(); }
    if (accept(Tok::LParen)) {
      F f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_kw("forall")) {
      bump();
      int v = parse_var();
      expect(Tok::LParen, "'('");
      F body = parse_formula();
      expect(Tok::RParen, "')'");
      return mk_forall(v, body);
    }
    if (at_kw("exists")) {
      bump();
      Cmp cmp;
      bool counting = true;
      if (accept(Tok::Le)) cmp = Cmp::Le;
      else if (accept(Tok::Ge)) cmp = Cmp::Ge;
      else if (accept(Tok::Eq)) cmp = Cmp::Eq;
      else counting = false;
      if (!counting) {
        int v = parse_var();
        expect(Tok::LParen, "'('");
        F body = parse_formula();
        expect(Tok::RParen, "')'");
        return mk_exists(v, body);
      }
      return parse_counting(cmp);
    }
    if (at_kw("P")) {
      bump();
      expect(Tok::LBrack, "'['");
      Pfd k;
      k.left = parse_word();
      if (accept(Tok::Comma)) {
        k.right = parse_word();
        if (tok_.k == Tok::Comma) fail("PFDs have arity 1 or 2");
      }
      expect(Tok::RBrack, "']'");
      return mk_pfd_atom(std::move(k));
    }
    if (tok_.k == Tok::Id) return parse_atom();
    fail("expected formula");
  }

  F parse_counting(Cmp cmp) {
    Token at = tok_;
    if (tok_.k != Tok::Nat) fail("expected count");
    unsigned long long n = 0;
    for (char c : tok_.text) {
      n = n * 10 + (c - '0');
      if (n > kMaxCount)
        throw ParseError(at.line, at.col, "count exceeds cap");
    }
    bump();
    int v = parse_var();
    expect(Tok::LParen, "'('");
    Token gat = tok_;
    F guard = parse_atom();
    if (guard->k != FK::Binary || !guard->a.is_var() || !guard->b.is_var() ||
        guard->a.var == guard->b.var)
      throw ParseError(gat.line, gat.col, "counting quantifier must be guarded");
    expect(Tok::Amp, "'&'");
    F body = parse_formula();
    expect(Tok::RParen, "')'");
    return mk_count(cmp, n, v, guard, body);
  }

  Term parse_term() {
    Token at = tok_;
    std::string s = take_id();
    if (s == "x") return Term::X();
    if (s == "y") return Term::Y();
    int c = p_.sig.const_id(s);
    if (c < 0) throw ParseError(at.line, at.col, "undeclared constant '" + s + "'");
    return Term::C(c);
  }

  F parse_atom() {
    Token at = tok_;
    std::string head = tok_.text;
    if (head == "x" || head == "y" || p_.sig.const_id(head) >= 0) {
      Term s = parse_term();
      bool neq;
      if (accept(Tok::Eq)) neq = false;
      else if (accept(Tok::Neq)) neq = true;
      else fail("expected '=' or '!='");
      Term t = parse_term();
      if (!s.is_var() || !t.is_var())
        throw ParseError(at.line, at.col,
                         "equality atoms must relate the variables x and y");
      F e = mk_eq(s, t);
      return neq ? mk_not(e) : e;
    }
    bump();
    expect(Tok::LParen, "'('");
    Term s = parse_term();
    if (accept(Tok::Comma)) {
      Term t = parse_term();
      expect(Tok::RParen, "')'");
      if (s.is_var() != t.is_var())
        throw ParseError(at.line, at.col, "atom mixes a variable and a constant");
      int pr = p_.sig.binary_id(head);
      if (pr < 0) {
        if (p_.sig.unary_id(head) >= 0)
          throw ParseError(at.line, at.col, "arity mismatch for '" + head + "'");
        throw ParseError(at.line, at.col, "undeclared predicate '" + head + "'");
      }
      return mk_binary(pr, s, t);
    }
    expect(Tok::RParen, "')'");
    int pr = p_.sig.unary_id(head);
    if (pr < 0) {
      if (p_.sig.binary_id(head) >= 0)
        throw ParseError(at.line, at.col, "arity mismatch for '" + head + "'");
      throw ParseError(at.line, at.col, "undeclared predicate '" + head + "'");
    }
    return mk_unary(pr, s);
  }

  // --- db block ---

  int take_const() {
    Token at = tok_;
    std::string s = take_id();
    int c = p_.sig.const_id(s);
    if (c < 0) throw ParseError(at.line, at.col, "undeclared constant '" + s + "'");
    return c;
  }

  void parse_db() {
    expect_kw("db");
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      bool pos = !accept(Tok::Tilde);
      Token at = tok_;
      std::string head = take_id();
      expect(Tok::LParen, "'('");
      int c0 = take_const();
      GroundLit g;
      if (accept(Tok::Comma)) {
        int c1 = take_const();
        int pr = p_.sig.binary_id(head);
        if (pr < 0) {
          if (p_.sig.unary_id(head) >= 0)
            throw ParseError(at.line, at.col, "arity mismatch for '" + head + "'");
          throw ParseError(at.line, at.col, "undeclared predicate '" + head + "'");
        }
        g = {pr, true, c0, c1, pos};
      } else {
        int pr = p_.sig.unary_id(head);
        if (pr < 0) {
          if (p_.sig.binary_id(head) >= 0)
            throw ParseError(at.line, at.col, "arity mismatch for '" + head + "'");
          throw ParseError(at.line, at.col, "undeclared predicate '" + head + "'");
        }
        g = {pr, false, c0, -1, pos};
      }
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
      p_.db.add(g);
    }
  }

  // --- pfd block ---

  void parse_pfd() {
    expect_kw("pfd");
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      expect_kw("P");
      expect(Tok::LBrack, "'['");
      Pfd k;
      k.left = parse_word();
      if (accept(Tok::Comma)) {
        k.right = parse_word();
        if (tok_.k == Tok::Comma) fail("PFDs have arity 1 or 2");
      }
      expect(Tok::RBrack, "']'");
      expect(Tok::Semi, "';'");
      p_.pfds.push_back(std::move(k));
    }
  }

  std::vector<int> parse_word() {
    std::vector<int> w;
    do {
      Token at = tok_;
      std::string s = take_id();
      int b = p_.sig.binary_id(s);
      if (b < 0)
        throw ParseError(at.line, at.col, "undeclared predicate '" + s + "'");
      w.push_back(b);
    } while (tok_.k == Tok::Id);
    return w;
  }
};

}  // namespace

Problem parse_problem(const std::string& text) { return Parser(text).run(); }

}  // namespace gcdk::frontend
