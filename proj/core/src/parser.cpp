// Copyright 2026 The geodual Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "geodual/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "geodual/error.hpp"

namespace geodual {
namespace {

enum class Tok {
  Ident, Number, Slash, LParen, RParen, Comma, Dot, Equals, And, Or,
  Turnstile, LBracket, RBracket, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "\\/") {
      out.push_back({Tok::Or, "\\/", l, cl});
      advance(2);
      continue;
    }
    if (two == "|-") {
      out.push_back({Tok::Turnstile, "|-", l, cl});
      advance(2);
      continue;
    }
    Tok k;
    switch (c) {
      case '/': k = Tok::Slash; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '=': k = Tok::Equals; break;
      case '&': k = Tok::And; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      default:
        throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "rel" || s == "fun" || s == "axiom" || s == "top" ||
         s == "bot" || s == "exists";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Signature* sig)
      : toks_(std::move(toks)), sig_(sig) {}

  Theory theory() {
    Theory t;
    while (!at(Tok::End)) {
      const Token& kw = expect(Tok::Ident, "declaration");
      if (kw.text == "rel" || kw.text == "fun") {
        const Token& name = expect(Tok::Ident, "symbol name");
        if (is_keyword(name.text))
          throw ParseError(name.line, name.col, "keyword used as symbol name");
        expect(Tok::Slash, "'/'");
        const Token& ar = expect(Tok::Number, "arity");
        const int arity = std::stoi(ar.text);
        if (sig_->find_relation(name.text) || sig_->find_function(name.text))
          throw ParseError(name.line, name.col,
                           "duplicate symbol declaration " + name.text);
        if (kw.text == "rel")
          sig_->add_relation(name.text, arity);
        else
          sig_->add_function(name.text, arity);
      } else if (kw.text == "axiom") {
        t.axioms.push_back(sequent());
      } else {
        throw ParseError(kw.line, kw.col, "expected rel, fun or axiom");
      }
    }
    t.signature = *sig_;
    return canonical_form(t);
  }

  Sequent sequent() {
    reset_scope();
    Formula a = disjunction();
    expect(Tok::Turnstile, "'|-'");
    std::vector<VarId> ctx = context();
    Formula b = disjunction();
    check_bound(ctx);
    return canonical_form(Sequent{ctx, std::move(a), std::move(b)});
  }

  FormulaInContext formula_in_context() {
    reset_scope();
    std::vector<VarId> ctx = context();
    Formula f = disjunction();
    check_bound(ctx);
    return canonical_form(FormulaInContext{ctx, std::move(f)});
  }

  void expect_end() {
    if (!at(Tok::End)) fail("unexpected trailing input");
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char* w) const {
    return at(Tok::Ident) && peek().text == w;
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().col, msg);
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }

  void reset_scope() {
    free_.clear();
    first_use_.clear();
    bound_.clear();
    next_var_ = 0;
  }

  std::vector<VarId> context() {
    expect(Tok::LBracket, "'['");
    std::vector<VarId> ctx;
    std::vector<std::string> names;
    while (!at(Tok::RBracket)) {
      if (!ctx.empty()) expect(Tok::Comma, "',' or ']'");
      const Token& n = expect(Tok::Ident, "variable");
      if (is_keyword(n.text) || is_symbol(n.text))
        throw ParseError(n.line, n.col, "not a variable: " + n.text);
      for (const auto& m : names)
        if (m == n.text)
          throw ParseError(n.line, n.col, "repeated context variable " + n.text);
      names.push_back(n.text);
      auto it = free_.find(n.text);
      if (it == free_.end()) it = free_.emplace(n.text, next_var_++).first;
      ctx.push_back(it->second);
    }
    next();
    return ctx;
  }

  void check_bound(const std::vector<VarId>& ctx) const {
    for (const auto& [name, id] : free_) {
      bool found = false;
      for (VarId v : ctx) found = found || v == id;
      if (!found) {
        const auto& where = first_use_.at(name);
        throw ParseError(where.first, where.second, "unbound variable " + name);
      }
    }
  }

  bool is_symbol(const std::string& s) const {
    return sig_->find_relation(s) || sig_->find_function(s);
  }

  VarId lookup(const Token& t) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == t.text) return it->second;
    auto it = free_.find(t.text);
    if (it == free_.end()) {
      it = free_.emplace(t.text, next_var_++).first;
      first_use_.emplace(t.text, std::make_pair(t.line, t.col));
    }
    return it->second;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (at(Tok::Or)) {
      next();
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? std::move(parts.front())
                             : Formula::or_of(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (at(Tok::And)) {
      next();
      parts.push_back(unary());
    }
    return parts.size() == 1 ? std::move(parts.front())
                             : Formula::and_of(std::move(parts));
  }

  Formula unary() {
    if (at_word("exists")) {
      next();
      std::vector<VarId> vars;
      do {
        const Token& n = expect(Tok::Ident, "bound variable");
        if (is_keyword(n.text) || is_symbol(n.text))
          throw ParseError(n.line, n.col, "not a variable: " + n.text);
        const VarId v = next_var_++;
        bound_.emplace_back(n.text, v);
        vars.push_back(v);
      } while (at(Tok::Ident));
      expect(Tok::Dot, "'.'");
      Formula body = disjunction();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        body = Formula::exists(*it, std::move(body));
        bound_.pop_back();
      }
      return body;
    }
    if (at(Tok::LParen)) {
      next();
      Formula f = disjunction();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  Formula atom() {
    if (at_word("top")) {
      next();
      return Formula::top();
    }
    if (at_word("bot")) {
      next();
      return Formula::bot();
    }
    if (!at(Tok::Ident)) fail("expected formula");
    if (auto r = sig_->find_relation(peek().text)) {
      const Token name = next();
      std::vector<Term> args;
      if (at(Tok::LParen)) args = arguments();
      const int arity = sig_->relations()[*r].arity;
      if (static_cast<int>(args.size()) != arity)
        throw ParseError(name.line, name.col,
                         "arity mismatch for " + name.text + ": expected " +
                             std::to_string(arity) + ", got " +
                             std::to_string(args.size()));
      return Formula::relation(*r, std::move(args));
    }
    Term lhs = term();
    expect(Tok::Equals, "'='");
    Term rhs = term();
    return Formula::eq(std::move(lhs), std::move(rhs));
  }

  std::vector<Term> arguments() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    while (!at(Tok::RParen)) {
      if (!args.empty()) expect(Tok::Comma, "',' or ')'");
      args.push_back(term());
    }
    next();
    return args;
  }

  Term term() {
    const Token& t = expect(Tok::Ident, "term");
    if (is_keyword(t.text))
      throw ParseError(t.line, t.col, "keyword used as term: " + t.text);
    if (sig_->find_relation(t.text))
      throw ParseError(t.line, t.col, "relation symbol used as term: " + t.text);
    if (auto f = sig_->find_function(t.text)) {
      const Token name = t;
      std::vector<Term> args;
      if (at(Tok::LParen)) args = arguments();
      const int arity = sig_->functions()[*f].arity;
      if (static_cast<int>(args.size()) != arity)
        throw ParseError(name.line, name.col,
                         "arity mismatch for " + name.text + ": expected " +
                             std::to_string(arity) + ", got " +
                             std::to_string(args.size()));
      return Term::apply(*f, std::move(args));
    }
    if (at(Tok::LParen)) fail("unknown function symbol " + t.text);
    return Term::variable(lookup(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature* sig_;
  std::map<std::string, VarId> free_;
  std::map<std::string, std::pair<int, int>> first_use_;
  std::vector<std::pair<std::string, VarId>> bound_;
  VarId next_var_ = 0;
};

}  // namespace

Theory parse_theory(std::string_view text) {
  Signature sig;
  Parser p(lex(text), &sig);
  return p.theory();
}

FormulaInContext parse_formula_in_context(const Signature& sig,
                                          std::string_view text) {
  Signature copy = sig;
  Parser p(lex(text), &copy);
  auto f = p.formula_in_context();
  p.expect_end();
  return f;
}

Sequent parse_sequent(const Signature& sig, std::string_view text) {
  Signature copy = sig;
  Parser p(lex(text), &copy);
  auto s = p.sequent();
  p.expect_end();
  return s;
}

}  // namespace geodual
