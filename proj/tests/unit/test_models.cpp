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
#include "oracles.hpp"

using namespace geodual;

namespace {

int find_label(const ModelClass& mc, const std::string& label) {
  for (int m = 0; m < mc.model_count(); ++m)
    if (mc.model(m).label() == label) return m;
  return -1;
}

}  // namespace

TEST_CASE("tuple rank and unrank are inverse") {
  for (int blocks = 0; blocks <= 4; ++blocks)
    for (int arity = 0; arity <= 3; ++arity) {
      const std::size_t n = tuple_count(blocks, arity);
      std::size_t expected = 1;
      for (int i = 0; i < arity; ++i) expected *= blocks;
      CHECK(n == expected);
      for (std::size_t r = 0; r < n; ++r) CHECK(tuple_rank(tuple_unrank(r, blocks, arity), blocks) == r);
    }
}

TEST_CASE("set partitions follow the Bell numbers") {
  const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52};
  for (int n = 0; n <= 5; ++n) {
    std::vector<int> elems(n);
    for (int i = 0; i < n; ++i) elems[i] = i;
    CHECK(set_partitions(elems).size() == bell[n]);
  }
}

TEST_CASE("structure enumeration matches the subset-partition count") {
  Signature empty;
  for (int n = 1; n <= 4; ++n)
    CHECK(enumerate_structures(empty, IndexSet(n)).size() == oracle::set_models(n));
  Signature unary;
  unary.add_relation("P", 1);
  // One block choice doubles per block.
  CHECK(enumerate_structures(unary, IndexSet(1)).size() == 3);
  const auto labels = [&] {
    std::vector<std::string> out;
    for (const auto& M : enumerate_structures(empty, IndexSet(2))) out.push_back(M.label());
    return out;
  }();
  CHECK(labels == std::vector<std::string>{"{}", "{0}", "{1}", "{0,1}", "{0|1}"});
}

TEST_CASE("model classes of the reference theories") {
  for (int n = 1; n <= 3; ++n) {
    const auto eq = fixture::models(fixture::equality(), n);
    CHECK(static_cast<std::uint64_t>(eq->model_count()) == oracle::set_models(n));
    CHECK(static_cast<std::uint64_t>(eq->iso_count()) == oracle::set_isos(n));
    const auto sym = fixture::models(fixture::symmetric(), n);
    CHECK(static_cast<std::uint64_t>(sym->model_count()) == oracle::symmetric_models(n));
    CHECK(static_cast<std::uint64_t>(sym->iso_count()) == oracle::symmetric_isos(n));
  }
  const auto eq2 = fixture::models(fixture::equality(), 2);
  CHECK(eq2->model_count() == 5);
  CHECK(eq2->iso_count() == 12);
  CHECK(fixture::models(fixture::inconsistent(), 2)->model_count() == 0);
  CHECK(fixture::models(fixture::theory("rel P/1\naxiom top |- [x] P(x)\n"), 1)->model_count() == 2);
}

TEST_CASE("exhaustive and pruned model search agree") {
  for (const auto& T : {fixture::equality(), fixture::symmetric(),
                        fixture::theory("rel P/1\nfun c/0\naxiom top |- [] P(c)\n")}) {
    const ModelClass a = build_model_class(T, IndexSet(2));
    const ModelClass b = build_model_class_exhaustive(T, IndexSet(2));
    CHECK(a.models() == b.models());
    CHECK(a.isos() == b.isos());
  }
}

TEST_CASE("formula evaluation") {
  const auto T = fixture::symmetric();
  const Signature& sig = T->signature;
  auto M = IndexedStructure::from_partition(2, {{0}, {1}}, sig);
  M.set_relation(0, std::vector<int>{0, 1}, true);
  M.set_relation(0, std::vector<int>{1, 0}, true);
  const auto some = eval_formula(M, parse_formula_in_context(sig, "[x] exists y. E(x, y)"), sig);
  CHECK(some == std::vector<BlockTuple>{{0}, {1}});
  // Brute-force the same extension by assignment.
  std::vector<BlockTuple> brute;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      if (M.holds(0, std::vector<int>{x, y})) {
        brute.push_back({x});
        break;
      }
  CHECK(some == brute);
  CHECK(eval_formula(M, parse_formula_in_context(sig, "[x] top"), sig).size() == 2);
  CHECK(eval_formula(M, parse_formula_in_context(sig, "[] bot"), sig).empty());
  CHECK(is_model(M, *T));

  auto half = IndexedStructure::from_partition(2, {{0}, {1}}, sig);
  half.set_relation(0, std::vector<int>{0, 1}, true);
  CHECK_FALSE(is_model(half, *T));
  CHECK(is_model(IndexedStructure::from_partition(2, {}, sig), *T));
}

TEST_CASE("isomorphism enumeration") {
  Signature empty;
  const auto none = IndexedStructure::from_partition(2, {}, empty);
  const auto two = IndexedStructure::from_partition(2, {{0}, {1}}, empty);
  const auto m0 = IndexedStructure::from_partition(2, {{0}}, empty);
  const auto m01 = IndexedStructure::from_partition(2, {{0, 1}}, empty);
  CHECK(enumerate_isomorphisms(none, none).size() == 1);
  CHECK(enumerate_isomorphisms(two, two).size() == 2);
  CHECK(enumerate_isomorphisms(m0, m01).size() == 1);
  CHECK(enumerate_isomorphisms(m0, two).empty());
}

TEST_CASE("model class composition laws") {
  const auto mc = fixture::models(fixture::symmetric(), 2);
  for (int f = 0; f < mc->iso_count(); ++f) {
    const auto& F = mc->iso(f);
    CHECK(mc->compose(mc->identity(F.cod), f) == f);
    CHECK(mc->compose(f, mc->identity(F.dom)) == f);
    CHECK(mc->compose(mc->inverse(f), f) == mc->identity(F.dom));
    CHECK(mc->inverse(mc->inverse(f)) == f);
    CHECK(mc->find_iso(F.dom, F.cod, F.map) == f);
  }
  for (int m = 0; m < mc->model_count(); ++m) CHECK(mc->find_model(mc->model(m)) == m);
}

TEST_CASE("entailment over the model class") {
  const auto T = fixture::equality();
  const Signature& sig = T->signature;
  CHECK(entails(T, IndexSet(2), parse_sequent(sig, "top |- [x] top")));
  CHECK_FALSE(entails(T, IndexSet(2), parse_sequent(sig, "top |- [x] bot")));
  CHECK(entails(T, IndexSet(2), parse_sequent(sig, "x = y |- [x, y] top")));
  const auto S = fixture::symmetric();
  CHECK(entails(S, IndexSet(2), parse_sequent(S->signature, "E(x, y) |- [x, y] E(y, x)")));
  CHECK_FALSE(entails(S, IndexSet(2), parse_sequent(S->signature, "E(x, y) |- [x, y] x = y")));
  CHECK(entails(fixture::inconsistent(), IndexSet(2), parse_sequent(sig, "top |- [] bot")));
}

TEST_CASE("reducts along interpretations") {
  const auto S = fixture::symmetric();
  auto P = fixture::theory("rel P/1\n");
  Interpretation F;
  F.source = P;
  F.target = S;
  F.relation_images.push_back(parse_formula_in_context(S->signature, "[x] exists y. E(x, y)"));
  auto M = IndexedStructure::from_partition(2, {{0}, {1}}, S->signature);
  M.set_relation(0, std::vector<int>{0, 1}, true);
  M.set_relation(0, std::vector<int>{1, 0}, true);
  const auto R = reduct(M, F);
  CHECK(R.holds(0, std::vector<int>{0}));
  CHECK(R.holds(0, std::vector<int>{1}));
  CHECK(reduct(M, Interpretation::identity(S)) == M);
  const auto U = reduct(M, Interpretation::from_equality(S));
  CHECK(U.relation_count() == 0);
  CHECK(U.blocks() == M.blocks());
}

TEST_CASE("star construction") {
  const auto mc = fixture::models(fixture::equality(), 2);
  const int m0 = find_label(*mc, "{0}");
  const int m01 = find_label(*mc, "{0|1}");
  REQUIRE(m0 >= 0);
  REQUIRE(m01 >= 0);

  const auto moved = star_lemma(mc->model(m0), {0}, {1});
  CHECK(moved.model.label() == "{0,1}");
  CHECK(moved.model.block_of(1) == moved.map[mc->model(m0).block_of(0)]);

  const auto swapped = star_lemma(mc->model(m01), {0, 1}, {1, 0});
  CHECK(swapped.model.label() == "{0|1}");
  CHECK(swapped.map == std::vector<int>{1, 0});

  const auto same = star_lemma(mc->model(m01), {0, 1}, {0, 1});
  CHECK(same.map == std::vector<int>{0, 1});

  CHECK_FALSE(star_headroom(mc->model(find_label(*mc, "{}")), {}, {}));
  CHECK(star_headroom(mc->model(m01), {0}, {1}));
  CHECK_THROWS_AS(star_lemma(mc->model(m01), {0, 1}, {0, 0}), Error);
}

TEST_CASE("star construction property over every model at three elements") {
  const auto mc = fixture::models(fixture::symmetric(), 3);
  int checked = 0;
  for (const auto& M : mc->models())
    for (int a : M.domain())
      for (int b = 0; b < 3; ++b) {
        if (!star_headroom(M, {a}, {b})) continue;
        const auto s = star_lemma(M, {a}, {b});
        CHECK(is_model(s.model, mc->theory()));
        CHECK(is_isomorphism(M, s.model, s.map));
        CHECK(s.model.block_of(b) == s.map[M.block_of(a)]);
        ++checked;
      }
  CHECK(checked > 0);
}
