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

#include <map>

#include "geodual/error.hpp"
#include "oracles.hpp"

using namespace geodual;

namespace {

GroupoidOverS mod(TheoryPtr T, int n) { return mod_functor(std::move(T), IndexSet(n)); }

// Arrows between stable opens of U^k, counted from exhaustive subsets:
// a graph is a stable open of U^(k+l) that is single-valued, has front
// projection exactly A and back projection inside B.
std::size_t brute_arrow_count(const GroupoidOverS& g, int kmax) {
  const auto U = pullback_sheaf(g.over, generic_sheaf(g.sets));
  std::vector<EquivariantSheaf> powers;
  std::vector<std::vector<PointSet>> opens;
  for (int k = 0; k <= 2 * kmax; ++k) {
    powers.push_back(fiber_power(U, k));
    opens.push_back(oracle::stable_opens(powers.back()));
  }
  auto tuples = [](const EquivariantSheaf& P, const PointSet& s) {
    std::set<std::pair<int, std::vector<int>>> out;
    for (std::size_t p = 0; p < P.size(); ++p)
      if (s.test(p)) out.emplace(P.proj(static_cast<int>(p)), P.label(static_cast<int>(p)));
    return out;
  };
  std::size_t count = 0;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= kmax; ++l)
      for (const auto& G : opens[k + l]) {
        const auto graph = tuples(powers[k + l], G);
        std::map<std::pair<int, std::vector<int>>, int> values;
        std::set<std::pair<int, std::vector<int>>> front, back;
        for (const auto& [x, t] : graph) {
          std::vector<int> a(t.begin(), t.begin() + k), b(t.begin() + k, t.end());
          ++values[{x, a}];
          front.emplace(x, a);
          back.emplace(x, b);
        }
        bool functional = true;
        for (const auto& [key, n] : values)
          if (n > 1) functional = false;
        if (!functional) continue;
        bool front_is_object = false;
        for (const auto& A : opens[k])
          if (tuples(powers[k], A) == front) front_is_object = true;
        if (!front_is_object) continue;
        for (const auto& B : opens[l]) {
          const auto bt = tuples(powers[l], B);
          if (std::includes(bt.begin(), bt.end(), back.begin(), back.end())) ++count;
        }
      }
  return count;
}

}  // namespace

TEST_CASE("tuple layouts and projections") {
  const TupleLayout L({2, 1}, 2);
  CHECK(L.size() == 5);
  CHECK(L.offset(1) == 4);
  CHECK(L.bit(0, std::vector<int>{1, 0}) == 2);
  const TupleLayout L1({2, 1}, 1);
  Bits rel(5);
  rel.set(L.bit(0, std::vector<int>{0, 1}));
  rel.set(L.bit(1, std::vector<int>{0, 0}));
  const Bits front = project_front(L, L1, rel);
  CHECK(front.test(L1.bit(0, std::vector<int>{0})));
  CHECK_FALSE(front.test(L1.bit(0, std::vector<int>{1})));
  CHECK(front.test(L1.bit(1, std::vector<int>{0})));
  CHECK(is_functional(L, 1, rel));
  rel.set(L.bit(0, std::vector<int>{0, 0}));
  CHECK_FALSE(is_functional(L, 1, rel));
}

TEST_CASE("syntactic category of the empty theory") {
  const auto g = mod(fixture::equality(), 2);
  const auto C = syntactic_category(g.models, 1, 3);
  CHECK(C.objects[0].size() == 3);
  CHECK(C.objects[1].size() == 2);
  CHECK(C.saturated[0]);
  CHECK(C.saturated[1]);
  CHECK(C.identities_present);
  // [x|T] is the generic object.
  CHECK(C.generic.level == 1);
  CHECK(C.objects[1][C.generic.index].all());
}

TEST_CASE("syntactic category of the inconsistent theory") {
  const auto g = mod(fixture::inconsistent(), 2);
  CHECK(g.groupoid->object_count() == 0);
  const auto C = syntactic_category(g.models, 1, 3);
  for (int k = 0; k <= 2; ++k) CHECK(C.objects[k].size() == 1);
  CHECK(C.arrows.size() == 4);
  const auto F = form_functor(g, 1);
  for (int k = 0; k <= 2; ++k) CHECK(F.objects[k].size() == 1);
  const auto cr = counit(C, F);
  CHECK(cr.outcome == Outcome::Pass);
  CHECK(cr.arrow_map == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("Mod of the empty theory lies over the sets identically") {
  const auto g = mod(fixture::equality(), 2);
  for (std::size_t x = 0; x < g.groupoid->object_count(); ++x)
    CHECK(g.over.on_objects[x] == static_cast<int>(x));
  for (std::size_t f = 0; f < g.groupoid->arrow_count(); ++f)
    CHECK(g.over.on_arrows[f] == static_cast<int>(f));
  CHECK(generic_sheaf(g.sets).size() == 5);
}

TEST_CASE("form objects are the stable opens of the fibred powers") {
  const auto g = mod(fixture::equality(), 2);
  const auto F = form_functor(g, 1);
  const std::size_t expected[] = {3, 2, 3};
  for (int k = 0; k <= 2; ++k) {
    CHECK(F.objects[k].size() == expected[k]);
    CHECK(F.objects[k].size() == oracle::stable_opens(F.powers[k]).size());
  }
  CHECK(F.arrows.size() == brute_arrow_count(g, 1));
}

TEST_CASE("counit of the empty theory is a bijection") {
  const auto g = mod(fixture::equality(), 2);
  const auto C = syntactic_category(g.models, 1, 3);
  const auto F = form_functor(g, 1);
  const auto cr = counit(C, F);
  CHECK(cr.outcome == Outcome::Pass);
  CHECK(cr.syntactic_objects == std::vector<int>{3, 2});
  CHECK(cr.form_objects == std::vector<int>{3, 2});
  CHECK(cr.syntactic_arrows == 16);
  CHECK(cr.form_arrows == 16);
  // [x|bot] goes to the empty set.
  const auto& classes = C.catalog->classes(1);
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].key.none()) CHECK(F.objects[1][cr.object_map[1][i]].none());
}

TEST_CASE("counit of the symmetric relation closes at depth four") {
  const auto g = mod(fixture::symmetric(), 2);
  const auto F = form_functor(g, 1);
  const auto shallow = counit(syntactic_category(g.models, 1, 2), F);
  CHECK(shallow.outcome == Outcome::Gated);
  const auto deep = counit(syntactic_category(g.models, 1, 4), F);
  CHECK(deep.outcome == Outcome::Pass);
  CHECK(deep.form_objects == std::vector<int>{5, 7});
  CHECK(F.objects[2].size() == 116);
  CHECK(deep.form_arrows == 74);
}

TEST_CASE("counit rejects mismatched bounds") {
  const auto g = mod(fixture::equality(), 2);
  const auto C = syntactic_category(g.models, 2, 2);
  const auto F = form_functor(g, 1);
  CHECK_THROWS_AS(counit(C, F), PreconditionError);
}

TEST_CASE("form models agree with exhaustive search") {
  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto g = mod(T, 1);
    const auto F = form_functor(g, 1);
    const FormTheory ft = form_theory(F);
    const auto fast = form_models(F, ft);
    const ModelClass slow = build_model_class_exhaustive(ft.theory, IndexSet(1));
    CHECK(fast->models() == slow.models());
    CHECK(fast->model_count() == g.models->model_count());
  }
}

TEST_CASE("unit of a single point") {
  const auto sets = build_S_groupoid(IndexSet(2));
  int m0 = -1;
  for (int m = 0; m < sets.models->model_count(); ++m)
    if (sets.models->model(m).label() == "{0}") m0 = m;
  const auto p = point_over_S(sets, m0);
  const auto F = form_functor(p, 1);
  const auto eta = unit(F);
  CHECK(eta.violations.empty());
  const auto& M = eta.models.models->model(eta.morphism.on_objects[0]);
  CHECK(M.domain() == std::vector<int>{0});
  CHECK(M.block_count() == 1);
  CHECK(check_triangle_identities_groupoid(p, 1).holds());
}

TEST_CASE("unit of the empty groupoid") {
  const auto g = mod(fixture::inconsistent(), 2);
  const auto eta = unit(form_functor(g, 1));
  CHECK(eta.violations.empty());
  CHECK(eta.morphism.on_objects.empty());
  CHECK(eta.morphism.on_arrows.empty());
}

TEST_CASE("triangle identities") {
  for (const auto& T : {fixture::equality(), fixture::symmetric(), fixture::inconsistent(),
                        fixture::theory("fun c/0\n")}) {
    const auto rep = check_triangle_identities(mod(T, 2), 1);
    CHECK(rep.mod_side_checked);
    CHECK(rep.form_side);
    CHECK(rep.mod_side);
  }
  const auto g = mod(fixture::equality(), 2);
  CHECK(check_triangle_identities_groupoid(discrete_subgroupoid(g, {1, 2}), 1).holds());
}

TEST_CASE("unit is an isomorphism onto Mod(Form(Mod T))") {
  const auto g = mod(fixture::symmetric(), 2);
  const auto F = form_functor(g, 1, effective_level(g.models->signature(), 1));
  const auto eta = unit(F);
  CHECK(eta.violations.empty());
  CHECK(eta.models.models->model_count() == g.models->model_count());
  CHECK(eta.models.models->iso_count() == g.models->iso_count());
}

TEST_CASE("naturality of counit and unit") {
  const auto S = fixture::symmetric();
  auto P = fixture::theory("rel P/1\n");
  Interpretation F;
  F.source = P;
  F.target = S;
  F.relation_images.push_back(parse_formula_in_context(S->signature, "[x] exists y. E(x, y)"));
  CHECK(check_counit_naturality(F, IndexSet(2), 1, 2).empty());
  CHECK(check_counit_naturality(Interpretation::from_equality(S), IndexSet(2), 1, 2).empty());

  const auto g = mod(S, 2);
  for (int x = 0; x < static_cast<int>(g.groupoid->object_count()); ++x) {
    const auto pt = point_over_S(g.sets, g.over.on_objects[x]);
    const GroupoidMorphism h{pt.groupoid, g.groupoid, {x}, {g.groupoid->unit(x)}};
    CHECK(check_unit_naturality(pt, g, h, 1).empty());
  }
  // A map that does not commute with the maps to the sets is rejected.
  const auto pt = point_over_S(g.sets, g.over.on_objects[1]);
  const GroupoidMorphism wrong{pt.groupoid, g.groupoid, {0}, {g.groupoid->unit(0)}};
  CHECK_FALSE(check_unit_naturality(pt, g, wrong, 1).empty());
}

TEST_CASE("strong fullness") {
  for (const auto& T : {fixture::equality(), fixture::symmetric(), fixture::inconsistent()})
    CHECK(check_strong_fullness(mod(T, 2)).holds);
  const auto g = mod(fixture::equality(), 2);
  // {0} and {1} are isomorphic sets but only identities survive.
  const auto d = discrete_subgroupoid(g, {1, 2});
  const auto r = check_strong_fullness(d);
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness_object >= 0);
  const auto& h = g.sets.models->iso(r.witness_arrow);
  CHECK(h.cod == d.over.on_objects[r.witness_object]);
  CHECK(h.dom != h.cod);
}

TEST_CASE("conditions for groupoids of models") {
  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto rep = check_sem_conditions(mod(T, 2));
    CHECK(rep.strong_fullness.holds);
    CHECK(rep.condition_ii);
    CHECK(rep.failing.empty());
  }
  const auto g = mod(fixture::equality(), 2);
  const auto rep = check_sem_conditions(g);
  CHECK(rep.subgroupoids == 9);
  const auto d = check_sem_conditions(discrete_subgroupoid(g, {1, 2}));
  CHECK_FALSE(d.holds());
  CHECK_FALSE(d.strong_fullness.holds);
}

TEST_CASE("coherent frame conditions") {
  const auto g = mod(fixture::equality(), 2);
  const auto rep = coherent_check(g, 1);
  CHECK(rep.condition_i);
  CHECK(rep.condition_ii);
  REQUIRE(rep.frames.size() == 2);
  for (const auto& f : rep.frames) CHECK(f.compact == f.elements);
  CHECK(!rep.note.empty());
  REQUIRE(rep.projections.size() == 1);
  CHECK(rep.projections[0].mismatches == 0);

  // The pulled-back set along 0 -> 1, computed from the arrows directly.
  const TopGroupoid& G = *g.groupoid;
  const auto frame_b = coherent_frame(g, {});
  const auto frame_a = coherent_frame(g, {0});
  for (const auto& Sset : frame_b) {
    PointSet X(G.object_count());
    for (std::size_t f = 0; f < G.arrow_count(); ++f) {
      const int fi = static_cast<int>(f);
      if (Sset.test(G.dom(fi)) && g.carrier(G.cod(fi)).defined(0)) X.set(G.cod(fi));
    }
    CHECK(std::find(frame_a.begin(), frame_a.end(), X) != frame_a.end());
  }
  const auto empty = coherent_check(mod(fixture::inconsistent(), 2), 1);
  CHECK(empty.condition_i);
  CHECK(empty.condition_ii);
}

TEST_CASE("semantic quotient entails exactly what the models satisfy") {
  const auto q = semantic_quotient(fixture::symmetric(), IndexSet(2));
  const Signature& sig = q.models->signature();
  CHECK(q.entails(parse_sequent(sig, "E(x, y) |- [x, y] E(y, x)")));
  CHECK_FALSE(q.entails(parse_sequent(sig, "top |- [x] E(x, x)")));
  const auto bot = semantic_quotient(fixture::inconsistent(), IndexSet(2));
  CHECK(bot.entails(parse_sequent(bot.models->signature(), "top |- [] bot")));
}
