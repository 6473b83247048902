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

// Signatures, terms and geometric formulas (finitary disjunction only).

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace geodual {

using VarId = int;

struct Symbol {
  std::string name;
  int arity = 0;

  auto operator<=>(const Symbol&) const = default;
};

class Signature {
 public:
  int add_relation(std::string name, int arity);
  int add_function(std::string name, int arity);

  const std::vector<Symbol>& relations() const { return relations_; }
  const std::vector<Symbol>& functions() const { return functions_; }
  std::optional<int> find_relation(std::string_view name) const;
  std::optional<int> find_function(std::string_view name) const;
  bool empty() const { return relations_.empty() && functions_.empty(); }
  int max_arity() const;

  bool operator==(const Signature&) const = default;

 private:
  void check_fresh(const std::string& name, int arity) const;

  std::vector<Symbol> relations_;
  std::vector<Symbol> functions_;
};

struct Term {
  enum class Kind : std::uint8_t { Var, App };

  Kind kind = Kind::Var;
  VarId var = 0;
  int fun = -1;
  std::vector<Term> args;

  static Term variable(VarId v);
  static Term apply(int fun, std::vector<Term> args);

  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term& other) const;
};

struct Formula {
  enum class Kind : std::uint8_t { Top, Bot, Eq, Rel, And, Or, Exists };

  Kind kind = Kind::Top;
  int rel = -1;
  VarId bound = 0;
  std::vector<Term> terms;
  std::vector<Formula> subs;

  static Formula top();
  static Formula bot();
  static Formula eq(Term lhs, Term rhs);
  static Formula relation(int rel, std::vector<Term> args);
  // Raw n-ary connectives, kept exactly as given.
  static Formula and_of(std::vector<Formula> parts);
  static Formula or_of(std::vector<Formula> parts);
  static Formula exists(VarId v, Formula body);

  // Simplifying constructors: flatten nested connectives of the same kind
  // and drop units.
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);

  bool operator==(const Formula&) const = default;
  std::strong_ordering operator<=>(const Formula& other) const;
};

struct FormulaInContext {
  std::vector<VarId> context;
  Formula body;

  int arity() const { return static_cast<int>(context.size()); }
  bool operator==(const FormulaInContext&) const = default;
  std::strong_ordering operator<=>(const FormulaInContext& other) const;
};

struct Sequent {
  std::vector<VarId> context;
  Formula antecedent;
  Formula succedent;

  bool operator==(const Sequent&) const = default;
};

struct Theory {
  Signature signature;
  std::vector<Sequent> axioms;

  bool operator==(const Theory&) const = default;
};

using TheoryPtr = std::shared_ptr<const Theory>;

std::set<VarId> free_vars(const Term& t);
std::set<VarId> free_vars(const Formula& f);
VarId max_var(const Formula& f);  // -1 when no variable occurs
int depth(const Formula& f);

// Throws PreconditionError on arity errors or free variables outside the
// context.
void check_well_formed(const Signature& sig, const FormulaInContext& f);
void check_well_formed(const Signature& sig, const Sequent& s);
void check_well_formed(const Theory& t);

// Renames the context to x0..x(k-1) and binders to xk, xk+1, ... in
// preorder. Also rewrites empty conjunctions/disjunctions to top/bot.
FormulaInContext canonical_form(const FormulaInContext& f);
Sequent canonical_form(const Sequent& s);
Theory canonical_form(const Theory& t);

// Capture-avoiding; every free variable of f must be assigned.
Term substitute(const Term& t, const std::map<VarId, Term>& assignment);
Formula substitute(const Formula& f, const std::map<VarId, Term>& assignment);

// Substitutes the context of f by the given variables.
Formula instantiate(const FormulaInContext& f, const std::vector<VarId>& vars);

// Image of a source symbol under an interpretation: relations R/n go to
// formulas in n variables, functions f/n to graphs in n+1 variables.
struct Interpretation {
  TheoryPtr source;
  TheoryPtr target;
  std::vector<FormulaInContext> relation_images;
  std::vector<FormulaInContext> function_images;

  static Interpretation identity(TheoryPtr t);
  // The unique interpretation of the empty theory.
  static Interpretation from_equality(TheoryPtr target);
};

// Translates a source formula-in-context along F. Terms are unfolded
// through the graphs of the function images.
FormulaInContext translate(const Interpretation& F, const FormulaInContext& f);
Sequent translate(const Interpretation& F, const Sequent& s);

std::string to_string(const Signature& sig, const Term& t);
std::string to_string(const Signature& sig, const Formula& f);
std::string to_string(const Signature& sig, const FormulaInContext& f);
std::string to_string(const Signature& sig, const Sequent& s);
std::string to_string(const Theory& t);

inline std::string var_name(VarId v) { return "x" + std::to_string(v); }

}  // namespace geodual
