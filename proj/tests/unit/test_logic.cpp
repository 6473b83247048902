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

#include <doctest.h>

#include "geodual/error.hpp"
#include "geodual/parser.hpp"
#include "oracles.hpp"

using namespace geodual;

namespace {

Signature graph_signature() {
  Signature sig;
  sig.add_relation("E", 2);
  sig.add_relation("P", 1);
  sig.add_function("f", 1);
  return sig;
}

}  // namespace

TEST_CASE("signature rejects duplicate names") {
  Signature sig;
  sig.add_relation("R", 1);
  CHECK_THROWS_AS(sig.add_relation("R", 2), Error);
  CHECK(sig.find_relation("R") == 0);
  CHECK_FALSE(sig.find_function("R").has_value());
}

TEST_CASE("theory text parses into symbols and axioms") {
  const Theory t = parse_theory(
      "# comment\n"
      "rel E/2\n"
      "fun f/1\n"
      "axiom E(x, y) |- [x, y] E(y, x)\n"
      "axiom top |- [x] (exists y. E(x, y)) \\/ x = f(x)\n");
  CHECK(t.signature.relations().size() == 1);
  CHECK(t.signature.functions().size() == 1);
  REQUIRE(t.axioms.size() == 2);
  CHECK(t.axioms[0].context.size() == 2);
  CHECK(t.axioms[1].succedent.kind == Formula::Kind::Or);
  CHECK(t.signature.max_arity() == 2);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_theory("rel E/2\naxiom E(x) |- [x] top\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 1);
  } catch (const PreconditionError&) {
    // Arity errors may surface from the well-formedness check instead.
  }
  CHECK_THROWS_AS(parse_theory("axiom top |- [x] (top"), ParseError);
  CHECK_THROWS_AS(parse_theory("relation E/2"), ParseError);
}

TEST_CASE("printing and parsing round trip") {
  const Signature sig = graph_signature();
  const char* texts[] = {
      "[x0] top",
      "[x0, x1] E(x0, x1) & P(x1)",
      "[x0] exists x1. E(x0, x1) \\/ x0 = f(x0)",
      "[] bot",
      "[x0, x1] (E(x0, x1) \\/ P(x0)) & exists x2. E(x2, f(x1))",
  };
  for (const char* text : texts) {
    const FormulaInContext f = parse_formula_in_context(sig, text);
    const std::string printed = to_string(sig, f);
    CHECK(parse_formula_in_context(sig, printed) == f);
  }
}

TEST_CASE("free variables, depth and max variable") {
  const Signature sig = graph_signature();
  const auto f = parse_formula_in_context(sig, "[x, y] exists z. E(x, z) & P(y)");
  CHECK(free_vars(f.body) == std::set<VarId>{0, 1});
  CHECK(depth(f.body) == 2);
  CHECK(max_var(f.body) == 2);
  CHECK(depth(Formula::top()) == 0);
  CHECK(max_var(Formula::top()) == -1);
}

TEST_CASE("simplifying connectives flatten and drop units") {
  const Formula p = Formula::relation(1, {Term::variable(0)});
  const Formula q = Formula::eq(Term::variable(0), Term::variable(1));
  CHECK(Formula::conj({Formula::top(), p}) == p);
  CHECK(Formula::conj({p, Formula::bot()}) == Formula::bot());
  CHECK(Formula::disj({Formula::bot(), p}) == p);
  CHECK(Formula::disj({p, Formula::top()}) == Formula::top());
  const Formula nested = Formula::conj({p, Formula::conj({q, p})});
  CHECK(nested.subs.size() == 3);
  CHECK(Formula::conj({}) == Formula::top());
  CHECK(Formula::disj({}) == Formula::bot());
}

TEST_CASE("canonical form renames context and binders") {
  const Signature sig = graph_signature();
  const auto a = parse_formula_in_context(sig, "[u, v] exists w. E(u, w) & E(w, v)");
  const auto b = parse_formula_in_context(sig, "[p, q] exists r. E(p, r) & E(r, q)");
  CHECK(canonical_form(a) == canonical_form(b));
  CHECK(canonical_form(a).context == std::vector<VarId>{0, 1});
  CHECK(canonical_form(canonical_form(a)) == canonical_form(a));
}

TEST_CASE("well-formedness rejects bad arities and stray variables") {
  const Signature sig = graph_signature();
  FormulaInContext bad{{0}, Formula::relation(0, {Term::variable(0)})};
  CHECK_THROWS_AS(check_well_formed(sig, bad), PreconditionError);
  FormulaInContext stray{{0}, Formula::relation(1, {Term::variable(3)})};
  CHECK_THROWS_AS(check_well_formed(sig, stray), PreconditionError);
  FormulaInContext ok{{0}, Formula::relation(1, {Term::apply(0, {Term::variable(0)})})};
  CHECK_NOTHROW(check_well_formed(sig, ok));
}

TEST_CASE("substitution avoids capture") {
  const Signature sig = graph_signature();
  // exists x1. E(x0, x1) with x0 := x1 must not bind the substituted variable.
  const auto f = parse_formula_in_context(sig, "[x0] exists x1. E(x0, x1)");
  const Formula g = substitute(f.body, {{0, Term::variable(1)}});
  REQUIRE(g.kind == Formula::Kind::Exists);
  CHECK(g.bound != 1);
  CHECK(free_vars(g) == std::set<VarId>{1});
}

TEST_CASE("instantiate substitutes the context") {
  const Signature sig = graph_signature();
  const auto f = parse_formula_in_context(sig, "[a, b] E(a, b)");
  const Formula g = instantiate(f, {5, 5});
  CHECK(free_vars(g) == std::set<VarId>{5});
}

TEST_CASE("translation along an interpretation") {
  auto src = fixture::theory("rel P/1\n");
  auto dst = fixture::symmetric();
  Interpretation F;
  F.source = src;
  F.target = dst;
  F.relation_images.push_back(
      parse_formula_in_context(dst->signature, "[x] exists y. E(x, y)"));
  const auto phi = parse_formula_in_context(src->signature, "[x, y] P(x) & x = y");
  const auto img = translate(F, phi);
  CHECK(img.context.size() == 2);
  check_well_formed(dst->signature, img);
  CHECK(to_string(dst->signature, canonical_form(img)) ==
        to_string(dst->signature,
                  canonical_form(parse_formula_in_context(
                      dst->signature, "[x, y] (exists z. E(x, z)) & x = y"))));

  const auto id = Interpretation::identity(dst);
  const auto e = parse_formula_in_context(dst->signature, "[x] E(x, x)");
  CHECK(canonical_form(translate(id, e)) == canonical_form(e));

  const auto eq = Interpretation::from_equality(dst);
  CHECK(eq.relation_images.empty());
  CHECK(eq.function_images.empty());
}

TEST_CASE("function terms translate through their graphs") {
  auto src = fixture::theory("fun f/1\n");
  auto dst = fixture::theory("rel G/2\n");
  Interpretation F;
  F.source = src;
  F.target = dst;
  F.function_images.push_back(parse_formula_in_context(dst->signature, "[x, y] G(x, y)"));
  const auto phi = parse_formula_in_context(src->signature, "[x] f(x) = x");
  const auto img = translate(F, phi);
  check_well_formed(dst->signature, img);
  CHECK(free_vars(img.body) == std::set<VarId>{img.context[0]});
}

TEST_CASE("sequents print and parse back") {
  const Signature sig = graph_signature();
  const Sequent s = parse_sequent(sig, "E(x, y) |- [x, y] E(y, x)");
  CHECK(canonical_form(parse_sequent(sig, to_string(sig, s))) == canonical_form(s));
}
