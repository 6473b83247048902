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

// The syntactic category, the Mod and Form constructions over the groupoid
// of sets, unit and counit, and the characterization of groupoids of models.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geodual/site.hpp"

namespace geodual {

// An object of either category: a context length and an index into the
// object list of that length.
struct ObjectRef {
  int level = 0;
  int index = 0;

  auto operator<=>(const ObjectRef&) const = default;
};

// A functional relation from `from` to `to`, given by an object of length
// from.level + to.level.
struct CategoryArrow {
  ObjectRef from;
  ObjectRef to;
  int graph = 0;
  bool inclusion = false;

  auto operator<=>(const CategoryArrow&) const = default;
};

// Subsets of the disjoint union over objects x of blocks(x)^n, as bits in
// (x, lexicographic tuple) order.
class TupleLayout {
 public:
  TupleLayout() = default;
  TupleLayout(std::vector<int> blocks, int arity);

  int arity() const { return arity_; }
  std::size_t size() const { return offsets_.back(); }
  std::size_t objects() const { return blocks_.size(); }
  int blocks(int x) const { return blocks_[x]; }
  std::size_t offset(int x) const { return offsets_[x]; }
  std::size_t bit(int x, std::span<const int> tuple) const;

 private:
  std::vector<int> blocks_;
  int arity_ = 0;
  std::vector<std::size_t> offsets_{0};
};

// Projection of a relation in length k + l onto its first k coordinates.
Bits project_front(const TupleLayout& from, const TupleLayout& to, const Bits& rel);
// True when rel is the graph of a function from its front projection.
bool is_functional(const TupleLayout& layout, int front, const Bits& rel);
// Arrows between objects of length <= max_level; graphs come from the
// object lists of length up to 2 * max_level.
std::vector<CategoryArrow> enumerate_arrows(const std::vector<TupleLayout>& layouts,
                                            const std::vector<std::vector<Bits>>& objects,
                                            int max_level);

struct TheoryCategory {
  std::shared_ptr<const FormulaCatalog> catalog;
  int kmax = 1;
  // objects[k][i] is catalog class i of length k, for k <= 2 * kmax.
  std::vector<std::vector<Bits>> objects;
  std::vector<TupleLayout> layouts;
  std::vector<CategoryArrow> arrows;
  ObjectRef generic{1, 0};   // [x|T]
  bool identities_present = true;
  std::vector<bool> saturated;  // per length: the formula search closed up
};

TheoryCategory syntactic_category(std::shared_ptr<const ModelClass> mc, int kmax, int depth,
                                  std::size_t max_classes = 200000);

// The semantic theory T_S is exposed as entailment over the model class;
// its unit interpretation is the identity on syntax.
struct SemanticQuotient {
  std::shared_ptr<const ModelClass> models;
  Interpretation unit;

  bool entails(const Sequent& s) const { return geodual::entails(*models, s); }
};

SemanticQuotient semantic_quotient(TheoryPtr T, const IndexSet& S, const Limits& limits = {});

// A groupoid with a morphism to the groupoid of sets.
struct GroupoidOverS {
  GroupoidPtr groupoid;
  ModelGroupoid sets;
  GroupoidMorphism over;
  std::shared_ptr<const ModelClass> models;  // set when G is a groupoid of models

  const IndexedStructure& carrier(int x) const {
    return sets.models->model(over.on_objects[x]);
  }
  const StructIso& underlying(int f) const { return sets.models->iso(over.on_arrows[f]); }
};

GroupoidOverS mod_functor(TheoryPtr T, const IndexSet& S, const Limits& limits = {});
// The identity-only subgroupoid on the given models of M_T, over S.
GroupoidOverS discrete_subgroupoid(const GroupoidOverS& g, const std::vector<int>& objects);
// The one-object one-arrow groupoid sent to the given set.
GroupoidOverS point_over_S(const ModelGroupoid& sets, int set);

// The generic object: <<x|T>> over the groupoid of sets.
EquivariantSheaf generic_sheaf(const ModelGroupoid& sets);

struct RelationCategory {
  GroupoidOverS base;
  int kmax = 1;
  int levels = 2;                           // powers materialized up to here
  std::vector<EquivariantSheaf> powers;     // U_G^k
  std::vector<TupleLayout> layouts;
  std::vector<std::vector<Bits>> objects;   // stable opens of U_G^k, in layout bits
  std::vector<std::vector<int>> point_of_bit;  // layout bit -> point of U_G^k
  std::vector<CategoryArrow> arrows;

  std::optional<int> find(int level, const Bits& set) const;
  Bits to_bits(int level, const PointSet& points) const;
  PointSet to_points(int level, const Bits& bits) const;
};

// levels defaults to 2 * kmax.
RelationCategory form_functor(const GroupoidOverS& g, int kmax, int levels = -1,
                              std::size_t limit = 100000);
// Length needed to name every symbol of the signature as an object.
int effective_level(const Signature& sig, int kmax);

struct CounitReport {
  std::vector<int> syntactic_objects;  // per length <= kmax
  std::vector<int> form_objects;
  std::size_t syntactic_arrows = 0;
  std::size_t form_arrows = 0;
  std::vector<std::vector<int>> object_map;  // [length][class] -> form object or -1
  std::vector<int> arrow_map;                // syntactic arrow -> form arrow or -1
  bool objects_bijective = true;
  bool arrows_bijective = true;
  Outcome outcome = Outcome::Pass;
  std::string diagnosis;
};

// Requires form to be built over Mod(T) for the same model class.
CounitReport counit(const TheoryCategory& C, const RelationCategory& form);

// The finite presentation of a relation category as a theory: one relation
// per object of length <= levels, with axioms for top, bottom, inclusions,
// joins and meets, substitutions, existential projections and equality.
struct FormTheory {
  TheoryPtr theory;
  std::vector<std::vector<int>> symbol;      // [level][object] -> relation
  std::vector<std::vector<int>> generators;  // [level] -> join-prime objects
};

FormTheory form_theory(const RelationCategory& form);
// Models of a form theory by tuple types; every result is checked against
// the axioms.
std::shared_ptr<const ModelClass> form_models(const RelationCategory& form, const FormTheory& ft);

struct UnitMorphism {
  FormTheory theory;
  ModelGroupoid models;          // Mod(Form(G))
  GroupoidMorphism morphism;     // G -> Mod(Form(G))
  std::vector<std::string> violations;
};

// The structure on the carrier of x interpreting each object by its fiber.
IndexedStructure unit_structure(const RelationCategory& form, const FormTheory& ft, int x);
UnitMorphism unit(const RelationCategory& form);

struct TriangleReport {
  bool form_side = true;  // Form(eta_G) after eps_Form(G) = 1
  bool mod_side = true;   // Mod(eps_T) after eta_Mod(T) = 1
  bool mod_side_checked = false;
  std::vector<std::string> details;
  bool holds() const { return form_side && mod_side; }
};

TriangleReport check_form_triangle(const RelationCategory& form, const UnitMorphism& eta);
// Adds the Mod-side identity for G = Mod(T).
TriangleReport check_triangle_identities(const GroupoidOverS& modT, int kmax);
TriangleReport check_triangle_identities_groupoid(const GroupoidOverS& g, int kmax);

// eps_T' after F equals Form(Mod F) after eps_T on the classes of T.
std::vector<std::string> check_counit_naturality(const Interpretation& F, const IndexSet& S,
                                                 int kmax, int depth);
// eta_G' after h equals Mod(Form h) after eta_G for a morphism h: G -> G' over S.
std::vector<std::string> check_unit_naturality(const GroupoidOverS& g, const GroupoidOverS& g2,
                                               const GroupoidMorphism& h, int kmax);

struct StrongFullnessReport {
  bool holds = true;
  int checked = 0;
  int witness_object = -1;  // y with no lift
  int witness_arrow = -1;   // arrow of S into f0(y)
};

StrongFullnessReport check_strong_fullness(const GroupoidOverS& g);

struct NeighbourhoodWitness {
  int object = -1;
  PointSet W;
  std::vector<int> params;  // distinct, empty when no witness exists
  bool found = false;
};

struct SemReport {
  bool open_groupoid = true;  // d and c open maps
  StrongFullnessReport strong_fullness;
  std::size_t subgroupoids = 0;
  std::vector<PointSet> failing;          // N without witnesses
  std::vector<NeighbourhoodWitness> witnesses;
  bool condition_ii = true;
  bool holds() const { return strong_fullness.holds && condition_ii; }
};

SemReport check_sem_conditions(const GroupoidOverS& g, std::size_t limit = 10000);

struct FrameReport {
  std::vector<int> params;
  std::size_t elements = 0;
  std::size_t compact = 0;
  bool is_frame = true;
};

struct ProjectionReport {
  std::vector<int> a;  // k + 1 distinct elements
  std::vector<int> b;  // the first k of them
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  std::size_t noncompact = 0;
};

struct CoherentReport {
  std::vector<FrameReport> frames;          // condition (i) per length
  std::vector<ProjectionReport> projections;  // condition (ii) per k -> k + 1
  bool condition_i = true;
  bool condition_ii = true;
  std::string note;
};

// Frame of opens of f0^{-1}<a> closed under f1^{-1}<a -> a>.
std::vector<PointSet> coherent_frame(const GroupoidOverS& g, const std::vector<int>& a);
CoherentReport coherent_check(const GroupoidOverS& g, int kmax);

}  // namespace geodual
