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

#include "geodual/logic.hpp"

#include <algorithm>
#include <sstream>

#include "geodual/error.hpp"

namespace geodual {

// ---------------------------------------------------------------- Signature

void Signature::check_fresh(const std::string& name, int arity) const {
  if (arity < 0) throw PreconditionError("negative arity for " + name);
  if (find_relation(name) || find_function(name))
    throw PreconditionError("duplicate symbol " + name);
}

int Signature::add_relation(std::string name, int arity) {
  check_fresh(name, arity);
  relations_.push_back({std::move(name), arity});
  return static_cast<int>(relations_.size()) - 1;
}

int Signature::add_function(std::string name, int arity) {
  check_fresh(name, arity);
  functions_.push_back({std::move(name), arity});
  return static_cast<int>(functions_.size()) - 1;
}

static std::optional<int> find_symbol(const std::vector<Symbol>& syms,
                                      std::string_view name) {
  for (std::size_t i = 0; i < syms.size(); ++i)
    if (syms[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> Signature::find_relation(std::string_view name) const {
  return find_symbol(relations_, name);
}

std::optional<int> Signature::find_function(std::string_view name) const {
  return find_symbol(functions_, name);
}

int Signature::max_arity() const {
  int m = 0;
  for (const auto& s : relations_) m = std::max(m, s.arity);
  for (const auto& s : functions_) m = std::max(m, s.arity + 1);
  return m;
}

// ---------------------------------------------------------------- Term

Term Term::variable(VarId v) {
  Term t;
  t.kind = Kind::Var;
  t.var = v;
  return t;
}

Term Term::apply(int fun, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.fun = fun;
  t.args = std::move(args);
  return t;
}

template <class T>
static std::strong_ordering compare_vectors(const std::vector<T>& a,
                                            const std::vector<T>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return a.size() <=> b.size();
}

std::strong_ordering Term::operator<=>(const Term& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  if (auto c = var <=> o.var; c != 0) return c;
  if (auto c = fun <=> o.fun; c != 0) return c;
  return compare_vectors(args, o.args);
}

// ---------------------------------------------------------------- Formula

Formula Formula::top() { return Formula{}; }

Formula Formula::bot() {
  Formula f;
  f.kind = Kind::Bot;
  return f;
}

Formula Formula::eq(Term lhs, Term rhs) {
  Formula f;
  f.kind = Kind::Eq;
  f.terms = {std::move(lhs), std::move(rhs)};
  return f;
}

Formula Formula::relation(int rel, std::vector<Term> args) {
  Formula f;
  f.kind = Kind::Rel;
  f.rel = rel;
  f.terms = std::move(args);
  return f;
}

Formula Formula::and_of(std::vector<Formula> parts) {
  Formula f;
  f.kind = Kind::And;
  f.subs = std::move(parts);
  return f;
}

Formula Formula::or_of(std::vector<Formula> parts) {
  Formula f;
  f.kind = Kind::Or;
  f.subs = std::move(parts);
  return f;
}

Formula Formula::exists(VarId v, Formula body) {
  Formula f;
  f.kind = Kind::Exists;
  f.bound = v;
  f.subs.push_back(std::move(body));
  return f;
}

Formula Formula::conj(std::vector<Formula> parts) {
  std::vector<Formula> out;
  for (auto& p : parts) {
    if (p.kind == Kind::Top) continue;
    if (p.kind == Kind::Bot) return bot();
    if (p.kind == Kind::And) {
      for (auto& q : p.subs) out.push_back(std::move(q));
    } else {
      out.push_back(std::move(p));
    }
  }
  if (out.empty()) return top();
  if (out.size() == 1) return std::move(out.front());
  return and_of(std::move(out));
}

Formula Formula::disj(std::vector<Formula> parts) {
  std::vector<Formula> out;
  for (auto& p : parts) {
    if (p.kind == Kind::Bot) continue;
    if (p.kind == Kind::Top) return top();
    if (p.kind == Kind::Or) {
      for (auto& q : p.subs) out.push_back(std::move(q));
    } else {
      out.push_back(std::move(p));
    }
  }
  if (out.empty()) return bot();
  if (out.size() == 1) return std::move(out.front());
  return or_of(std::move(out));
}

std::strong_ordering Formula::operator<=>(const Formula& o) const {
  if (auto c = kind <=> o.kind; c != 0) return c;
  if (auto c = rel <=> o.rel; c != 0) return c;
  if (auto c = bound <=> o.bound; c != 0) return c;
  if (auto c = compare_vectors(terms, o.terms); c != 0) return c;
  return compare_vectors(subs, o.subs);
}

std::strong_ordering FormulaInContext::operator<=>(
    const FormulaInContext& o) const {
  if (auto c = compare_vectors(context, o.context); c != 0) return c;
  return body <=> o.body;
}

// ---------------------------------------------------------------- queries

static void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_var()) {
    out.insert(t.var);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, out);
}

std::set<VarId> free_vars(const Term& t) {
  std::set<VarId> out;
  collect_vars(t, out);
  return out;
}

std::set<VarId> free_vars(const Formula& f) {
  std::set<VarId> out;
  switch (f.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      break;
    case Formula::Kind::Eq:
    case Formula::Kind::Rel:
      for (const auto& t : f.terms) collect_vars(t, out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& s : f.subs) {
        auto v = free_vars(s);
        out.insert(v.begin(), v.end());
      }
      break;
    case Formula::Kind::Exists:
      out = free_vars(f.subs.front());
      out.erase(f.bound);
      break;
  }
  return out;
}

static VarId max_var(const Term& t) {
  if (t.is_var()) return t.var;
  VarId m = -1;
  for (const auto& a : t.args) m = std::max(m, max_var(a));
  return m;
}

VarId max_var(const Formula& f) {
  VarId m = f.kind == Formula::Kind::Exists ? f.bound : -1;
  for (const auto& t : f.terms) m = std::max(m, max_var(t));
  for (const auto& s : f.subs) m = std::max(m, max_var(s));
  return m;
}

int depth(const Formula& f) {
  int d = 0;
  for (const auto& s : f.subs) d = std::max(d, depth(s));
  const bool connective = f.kind == Formula::Kind::And ||
                          f.kind == Formula::Kind::Or ||
                          f.kind == Formula::Kind::Exists;
  return connective && !f.subs.empty() ? d + 1 : d;
}

// ---------------------------------------------------------------- checking

static void check_term(const Signature& sig, const Term& t) {
  if (t.is_var()) return;
  if (t.fun < 0 || t.fun >= static_cast<int>(sig.functions().size()))
    throw PreconditionError("unknown function symbol");
  const auto& s = sig.functions()[t.fun];
  if (static_cast<int>(t.args.size()) != s.arity)
    throw PreconditionError("arity mismatch for " + s.name);
  for (const auto& a : t.args) check_term(sig, a);
}

static void check_formula(const Signature& sig, const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Eq:
      if (f.terms.size() != 2) throw PreconditionError("malformed equation");
      break;
    case Formula::Kind::Rel: {
      if (f.rel < 0 || f.rel >= static_cast<int>(sig.relations().size()))
        throw PreconditionError("unknown relation symbol");
      const auto& s = sig.relations()[f.rel];
      if (static_cast<int>(f.terms.size()) != s.arity)
        throw PreconditionError("arity mismatch for " + s.name);
      break;
    }
    case Formula::Kind::Exists:
      if (f.subs.size() != 1) throw PreconditionError("malformed quantifier");
      break;
    default:
      break;
  }
  for (const auto& t : f.terms) check_term(sig, t);
  for (const auto& s : f.subs) check_formula(sig, s);
}

static void check_context(const std::vector<VarId>& ctx,
                          const std::set<VarId>& fv) {
  std::set<VarId> seen(ctx.begin(), ctx.end());
  if (seen.size() != ctx.size())
    throw PreconditionError("context variables are not distinct");
  for (VarId v : fv)
    if (!seen.count(v))
      throw PreconditionError("free variable " + var_name(v) +
                              " not in context");
}

void check_well_formed(const Signature& sig, const FormulaInContext& f) {
  check_formula(sig, f.body);
  check_context(f.context, free_vars(f.body));
}

void check_well_formed(const Signature& sig, const Sequent& s) {
  check_formula(sig, s.antecedent);
  check_formula(sig, s.succedent);
  auto fv = free_vars(s.antecedent);
  auto fv2 = free_vars(s.succedent);
  fv.insert(fv2.begin(), fv2.end());
  check_context(s.context, fv);
}

void check_well_formed(const Theory& t) {
  for (const auto& ax : t.axioms) check_well_formed(t.signature, ax);
}

// ---------------------------------------------------------------- renaming

namespace {

struct Renamer {
  std::map<VarId, VarId> scope;
  VarId next = 0;

  Term term(const Term& t) const {
    if (t.is_var()) {
      auto it = scope.find(t.var);
      if (it == scope.end())
        throw PreconditionError("free variable " + var_name(t.var) +
                                " not in context");
      return Term::variable(it->second);
    }
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(term(a));
    return Term::apply(t.fun, std::move(args));
  }

  Formula formula(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot:
        return f;
      case Formula::Kind::Eq:
        return Formula::eq(term(f.terms[0]), term(f.terms[1]));
      case Formula::Kind::Rel: {
        std::vector<Term> args;
        for (const auto& t : f.terms) args.push_back(term(t));
        return Formula::relation(f.rel, std::move(args));
      }
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        if (f.subs.empty())
          return f.kind == Formula::Kind::And ? Formula::top()
                                              : Formula::bot();
        std::vector<Formula> parts;
        for (const auto& s : f.subs) parts.push_back(formula(s));
        return f.kind == Formula::Kind::And ? Formula::and_of(std::move(parts))
                                            : Formula::or_of(std::move(parts));
      }
      case Formula::Kind::Exists: {
        const VarId fresh = next++;
        auto saved = scope.find(f.bound) != scope.end()
                         ? std::optional<VarId>(scope[f.bound])
                         : std::nullopt;
        scope[f.bound] = fresh;
        Formula body = formula(f.subs.front());
        if (saved)
          scope[f.bound] = *saved;
        else
          scope.erase(f.bound);
        return Formula::exists(fresh, std::move(body));
      }
    }
    return f;
  }
};

Renamer context_renamer(const std::vector<VarId>& ctx) {
  Renamer r;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (r.scope.count(ctx[i]))
      throw PreconditionError("context variables are not distinct");
    r.scope[ctx[i]] = static_cast<VarId>(i);
  }
  r.next = static_cast<VarId>(ctx.size());
  return r;
}

std::vector<VarId> iota_context(std::size_t k) {
  std::vector<VarId> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = static_cast<VarId>(i);
  return out;
}

}  // namespace

FormulaInContext canonical_form(const FormulaInContext& f) {
  Renamer r = context_renamer(f.context);
  return {iota_context(f.context.size()), r.formula(f.body)};
}

Sequent canonical_form(const Sequent& s) {
  Renamer a = context_renamer(s.context);
  Renamer b = context_renamer(s.context);
  return {iota_context(s.context.size()), a.formula(s.antecedent),
          b.formula(s.succedent)};
}

Theory canonical_form(const Theory& t) {
  Theory out{t.signature, {}};
  for (const auto& ax : t.axioms) out.axioms.push_back(canonical_form(ax));
  return out;
}

// ---------------------------------------------------------------- substitution

namespace {

VarId max_var_in(const std::map<VarId, Term>& assignment) {
  VarId m = -1;
  for (const auto& [v, t] : assignment) {
    m = std::max(m, v);
    m = std::max(m, max_var(t));
  }
  return m;
}

Term subst_term(const Term& t, const std::map<VarId, Term>& a) {
  if (t.is_var()) {
    auto it = a.find(t.var);
    if (it == a.end())
      throw PreconditionError("unassigned free variable " + var_name(t.var));
    return it->second;
  }
  std::vector<Term> args;
  for (const auto& x : t.args) args.push_back(subst_term(x, a));
  return Term::apply(t.fun, std::move(args));
}

Formula subst(const Formula& f, const std::map<VarId, Term>& a, VarId& fresh) {
  switch (f.kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return f;
    case Formula::Kind::Eq:
      return Formula::eq(subst_term(f.terms[0], a), subst_term(f.terms[1], a));
    case Formula::Kind::Rel: {
      std::vector<Term> args;
      for (const auto& t : f.terms) args.push_back(subst_term(t, a));
      return Formula::relation(f.rel, std::move(args));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& s : f.subs) parts.push_back(subst(s, a, fresh));
      return f.kind == Formula::Kind::And ? Formula::and_of(std::move(parts))
                                          : Formula::or_of(std::move(parts));
    }
    case Formula::Kind::Exists: {
      const Formula& body = f.subs.front();
      std::set<VarId> hit;
      for (VarId v : free_vars(body)) {
        if (v == f.bound) continue;
        auto it = a.find(v);
        if (it == a.end())
          throw PreconditionError("unassigned free variable " + var_name(v));
        collect_vars(it->second, hit);
      }
      std::map<VarId, Term> inner;
      for (VarId v : free_vars(body))
        if (v != f.bound) inner.emplace(v, a.at(v));
      VarId b = f.bound;
      if (hit.count(b)) b = fresh++;
      inner[f.bound] = Term::variable(b);
      return Formula::exists(b, subst(body, inner, fresh));
    }
  }
  return f;
}

}  // namespace

Term substitute(const Term& t, const std::map<VarId, Term>& assignment) {
  return subst_term(t, assignment);
}

Formula substitute(const Formula& f, const std::map<VarId, Term>& assignment) {
  VarId fresh = std::max(max_var(f), max_var_in(assignment)) + 1;
  return subst(f, assignment, fresh);
}

Formula instantiate(const FormulaInContext& f, const std::vector<VarId>& vars) {
  if (vars.size() != f.context.size())
    throw PreconditionError("instantiation length mismatch");
  std::map<VarId, Term> a;
  for (std::size_t i = 0; i < vars.size(); ++i)
    a[f.context[i]] = Term::variable(vars[i]);
  return substitute(f.body, a);
}

// ---------------------------------------------------------------- translation

Interpretation Interpretation::identity(TheoryPtr t) {
  Interpretation F{t, t, {}, {}};
  const auto& sig = t->signature;
  for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r) {
    const int n = sig.relations()[r].arity;
    std::vector<Term> args;
    for (int i = 0; i < n; ++i) args.push_back(Term::variable(i));
    F.relation_images.push_back(
        {iota_context(n), Formula::relation(r, std::move(args))});
  }
  for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f) {
    const int n = sig.functions()[f].arity;
    std::vector<Term> args;
    for (int i = 0; i < n; ++i) args.push_back(Term::variable(i));
    F.function_images.push_back(
        {iota_context(n + 1),
         Formula::eq(Term::apply(f, std::move(args)), Term::variable(n))});
  }
  return F;
}

Interpretation Interpretation::from_equality(TheoryPtr target) {
  return Interpretation{std::make_shared<const Theory>(), std::move(target),
                        {}, {}};
}

namespace {

struct Translator {
  const Interpretation& F;
  VarId fresh;

  // Formula asserting out = t in the target language.
  Formula term_graph(const Term& t, VarId out) {
    if (t.is_var())
      return Formula::eq(Term::variable(out), Term::variable(t.var));
    std::vector<VarId> vars;
    std::vector<VarId> bound;
    std::vector<Formula> parts;
    for (const auto& a : t.args) {
      if (a.is_var()) {
        vars.push_back(a.var);
      } else {
        const VarId z = fresh++;
        bound.push_back(z);
        vars.push_back(z);
        parts.push_back(term_graph(a, z));
      }
    }
    vars.push_back(out);
    parts.push_back(instantiate(F.function_images.at(t.fun), vars));
    return close(bound, Formula::conj(std::move(parts)));
  }

  static Formula close(const std::vector<VarId>& bound, Formula body) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      body = Formula::exists(*it, std::move(body));
    return body;
  }

  // Replaces non-variable argument terms by fresh witnesses.
  template <class Build>
  Formula atom(const std::vector<Term>& terms, Build build) {
    std::vector<VarId> vars;
    std::vector<VarId> bound;
    std::vector<Formula> parts;
    for (const auto& t : terms) {
      if (t.is_var()) {
        vars.push_back(t.var);
      } else {
        const VarId z = fresh++;
        bound.push_back(z);
        vars.push_back(z);
        parts.push_back(term_graph(t, z));
      }
    }
    parts.push_back(build(vars));
    return close(bound, Formula::conj(std::move(parts)));
  }

  Formula formula(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Top:
      case Formula::Kind::Bot:
        return f;
      case Formula::Kind::Eq:
        return atom(f.terms, [](const std::vector<VarId>& v) {
          return Formula::eq(Term::variable(v[0]), Term::variable(v[1]));
        });
      case Formula::Kind::Rel:
        return atom(f.terms, [&](const std::vector<VarId>& v) {
          return instantiate(F.relation_images.at(f.rel), v);
        });
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> parts;
        for (const auto& s : f.subs) parts.push_back(formula(s));
        return f.kind == Formula::Kind::And ? Formula::and_of(std::move(parts))
                                            : Formula::or_of(std::move(parts));
      }
      case Formula::Kind::Exists:
        return Formula::exists(f.bound, formula(f.subs.front()));
    }
    return f;
  }
};

VarId max_context(const std::vector<VarId>& ctx) {
  VarId m = -1;
  for (VarId v : ctx) m = std::max(m, v);
  return m;
}

}  // namespace

FormulaInContext translate(const Interpretation& F, const FormulaInContext& f) {
  Translator t{F, std::max(max_var(f.body), max_context(f.context)) + 1};
  return canonical_form(FormulaInContext{f.context, t.formula(f.body)});
}

Sequent translate(const Interpretation& F, const Sequent& s) {
  VarId start = std::max({max_var(s.antecedent), max_var(s.succedent),
                          max_context(s.context)}) +
                1;
  Translator t{F, start};
  Formula a = t.formula(s.antecedent);
  Formula b = t.formula(s.succedent);
  return canonical_form(Sequent{s.context, std::move(a), std::move(b)});
}

// ---------------------------------------------------------------- printing

std::string to_string(const Signature& sig, const Term& t) {
  if (t.is_var()) return var_name(t.var);
  std::string out = sig.functions().at(t.fun).name;
  if (t.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(sig, t.args[i]);
  }
  return out + ")";
}

namespace {

std::string print(const Signature& sig, const Formula& f);

std::string wrapped(const Signature& sig, const Formula& f, bool wrap) {
  std::string s = print(sig, f);
  return wrap ? "(" + s + ")" : s;
}

std::string print(const Signature& sig, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Top:
      return "top";
    case K::Bot:
      return "bot";
    case K::Eq:
      return to_string(sig, f.terms[0]) + " = " + to_string(sig, f.terms[1]);
    case K::Rel: {
      std::string out = sig.relations().at(f.rel).name;
      if (f.terms.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) {
        if (i) out += ", ";
        out += to_string(sig, f.terms[i]);
      }
      return out + ")";
    }
    case K::And: {
      if (f.subs.empty()) return "top";
      std::string out;
      for (std::size_t i = 0; i < f.subs.size(); ++i) {
        if (i) out += " & ";
        const K k = f.subs[i].kind;
        out += wrapped(sig, f.subs[i], k == K::And || k == K::Or || k == K::Exists);
      }
      return out;
    }
    case K::Or: {
      if (f.subs.empty()) return "bot";
      std::string out;
      for (std::size_t i = 0; i < f.subs.size(); ++i) {
        if (i) out += " \\/ ";
        const K k = f.subs[i].kind;
        out += wrapped(sig, f.subs[i], k == K::And || k == K::Or || k == K::Exists);
      }
      return out;
    }
    case K::Exists:
      return "exists " + var_name(f.bound) + ". " + print(sig, f.subs.front());
  }
  return "";
}

std::string print_context(const std::vector<VarId>& ctx) {
  std::string out = "[";
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    out += var_name(ctx[i]);
  }
  return out + "]";
}

}  // namespace

std::string to_string(const Signature& sig, const Formula& f) {
  return print(sig, f);
}

std::string to_string(const Signature& sig, const FormulaInContext& f) {
  return print_context(f.context) + " " + print(sig, f.body);
}

std::string to_string(const Signature& sig, const Sequent& s) {
  return print(sig, s.antecedent) + " |- " + print_context(s.context) + " " +
         print(sig, s.succedent);
}

std::string to_string(const Theory& t) {
  std::ostringstream out;
  for (const auto& r : t.signature.relations())
    out << "rel " << r.name << "/" << r.arity << "\n";
  for (const auto& f : t.signature.functions())
    out << "fun " << f.name << "/" << f.arity << "\n";
  for (const auto& ax : t.axioms)
    out << "axiom " << to_string(t.signature, ax) << "\n";
  return out.str();
}

}  // namespace geodual
