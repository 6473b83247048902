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

TEST_CASE("opens agree with the subbasis-generated topology") {
  FinSpace empty_sub(2, {"e"}, {PointSet(2)});
  CHECK(empty_sub.opens().size() == 2);
  FinSpace discrete(2, {"a", "b"}, {make_set(2, {0}), make_set(2, {1})});
  CHECK(discrete.opens().size() == 4);
  CHECK(discrete.is_t0());
  FinSpace indiscrete(2, {}, {});
  CHECK(indiscrete.opens().size() == 2);
  CHECK_FALSE(indiscrete.is_t0());

  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto mc = fixture::models(T, 2);
    for (const FinSpace& X : {model_space(*mc)}) {
      const auto expected = oracle::generated_opens(X);
      const auto got = X.opens();
      CHECK(std::set<PointSet>(got.begin(), got.end()) == expected);
      for (const auto& o : expected) {
        CHECK(X.is_open(o));
        CHECK(X.hull(o) == o);
        CHECK(X.interior(o) == o);
      }
    }
  }
}

TEST_CASE("hull and interior bracket every subset") {
  const auto mc = fixture::models(fixture::equality(), 2);
  const FinSpace X = model_space(*mc);
  const auto opens = oracle::generated_opens(X);
  for (std::uint64_t m = 0; m < (1u << X.size()); ++m) {
    const PointSet s = oracle::bits_of(X.size(), m);
    PointSet least = X.full(), greatest = X.empty();
    for (const auto& o : opens) {
      if (s.is_subset_of(o)) least &= o;
      if (o.is_subset_of(s)) greatest |= o;
    }
    CHECK(X.hull(s) == least);
    CHECK(X.interior(s) == greatest);
  }
}

TEST_CASE("continuity and openness of maps against the lattices") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const TopGroupoid& G = *mg.groupoid;
  const auto obj = oracle::generated_opens(G.objects());
  const auto arr = oracle::generated_opens(G.arrows());
  auto brute_continuous = [](const auto& from, const auto& to_opens, const std::vector<int>& f) {
    for (const auto& o : to_opens)
      if (!from.count(preimage(f, o))) return false;
    return true;
  };
  CHECK(brute_continuous(arr, obj, G.dom_map()) == is_continuous(G.arrows(), G.objects(), G.dom_map()));
  CHECK(brute_continuous(arr, obj, G.cod_map()));
  CHECK(brute_continuous(obj, arr, G.unit_map()));
  CHECK(brute_continuous(arr, arr, G.inverse_map()));
  bool open = true;
  for (const auto& o : arr)
    if (!obj.count(image(G.cod_map(), o, G.object_count()))) open = false;
  CHECK(open == codomain_map_open(G));
}

TEST_CASE("the pair-merge set of the logical topology is open") {
  const auto mc = fixture::models(fixture::equality(), 2);
  const FinSpace X = model_space(*mc);
  const auto eq = parse_formula_in_context(mc->signature(), "[x, y] x = y");
  const PointSet merged = basic_open_points(*mc, {eq, {0, 1}});
  CHECK(fixture::ints(merged) == std::vector<int>{3});
  CHECK(X.is_open(merged));
  const auto top = parse_formula_in_context(mc->signature(), "[x] top");
  CHECK(fixture::ints(basic_open_points(*mc, {top, {0}})) == std::vector<int>{1, 3, 4});
  CHECK(basic_open_points(*mc, BasicOpenM::trivial()).count() == 5);
}

TEST_CASE("basic opens of the isomorphism space") {
  const auto mc = fixture::models(fixture::equality(), 2);
  BasicOpenI keep0;
  keep0.preserve = {{0, 0}};
  const PointSet a = basic_open_arrows(*mc, keep0);
  for (int f = 0; f < mc->iso_count(); ++f) {
    const auto& F = mc->iso(f);
    const auto& D = mc->model(F.dom);
    const auto& C = mc->model(F.cod);
    const bool expected = D.defined(0) && C.defined(0) && F.map[D.block_of(0)] == C.block_of(0);
    CHECK(a.test(f) == expected);
  }
  CHECK(basic_open_arrows(*mc, BasicOpenI{}).count() == 12);
  const auto top = parse_formula_in_context(mc->signature(), "[x] top");
  BasicOpenI send{{top, {0}}, {{0, 1}}, {top, {1}}};
  CHECK(basic_open_arrows(*mc, send) == maps_to(*mc, 0, 1));
}

TEST_CASE("completely prime filters against the definition") {
  FinSpace discrete(2, {"a", "b"}, {make_set(2, {0}), make_set(2, {1})});
  CHECK(cp_filters(discrete).size() == 2);
  CHECK(cp_filters(FinSpace(2, {}, {})).size() == 1);

  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto mc = fixture::models(T, 2);
    const FinSpace X = model_space(*mc);
    const auto opens = oracle::generated_opens(X);
    std::vector<PointSet> brute;
    for (const auto& m : opens) {
      if (m.none()) continue;
      PointSet cover = X.empty();
      for (const auto& o : opens)
        if (!m.is_subset_of(o)) cover |= o;
      if (!m.is_subset_of(cover)) brute.push_back(m);
    }
    std::vector<PointSet> got;
    for (const auto& F : cp_filters(X)) got.push_back(F.least);
    CHECK(got == brute);
  }
}

TEST_CASE("sobriety round trip on the model space") {
  const auto mc = fixture::models(fixture::equality(), 2);
  const FinSpace X = model_space(*mc);
  REQUIRE(X.is_t0());
  CHECK(cp_filters(X).size() == 5);
  for (int m = 0; m < mc->model_count(); ++m)
    CHECK(filter_to_model(*mc, X, neighborhood_filter(X, m)) == mc->model(m));
}
