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

FormulaInContext formula(const ModelClass& mc, const char* text) {
  return parse_formula_in_context(mc.signature(), text);
}

int find_label(const ModelClass& mc, const std::string& label) {
  for (int m = 0; m < mc.model_count(); ++m)
    if (mc.model(m).label() == label) return m;
  return -1;
}

}  // namespace

TEST_CASE("definable sheaves of the empty theory") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const auto d = definable_sheaf(mg, formula(mc, "[x] top"));
  CHECK(d.sheaf.size() == 5);
  CHECK(check_sheaf(d.sheaf).empty());
  const int m01 = find_label(mc, "{0|1}");
  CHECK(d.sheaf.fiber(m01).size() == 2);
  CHECK(d.sheaf.fiber(find_label(mc, "{}")).empty());

  const auto terminal = definable_sheaf(mg, formula(mc, "[] top"));
  CHECK(terminal.sheaf.size() == 5);
  for (int m = 0; m < 5; ++m) CHECK(terminal.sheaf.fiber(m).size() == 1);
  CHECK(definable_sheaf(mg, formula(mc, "[x] bot")).sheaf.size() == 0);
}

TEST_CASE("the application action") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const auto d = definable_sheaf(mg, formula(mc, "[x] top"));
  const int m0 = find_label(mc, "{0}"), m01 = find_label(mc, "{0|1}"), merged = find_label(mc, "{0,1}");
  const int p0 = *d.sheaf.find(m01, {0});
  const int p1 = *d.sheaf.find(m01, {1});
  int swap = -1;
  for (int f : mc.isos_between(m01, m01))
    if (mc.iso(f).map == std::vector<int>{1, 0}) swap = f;
  REQUIRE(swap >= 0);
  CHECK(d.sheaf.act(swap, p0) == p1);
  CHECK(d.sheaf.act(mc.identity(m01), p0) == p0);
  const int f = mc.isos_between(m0, merged).front();
  CHECK(d.sheaf.act(f, *d.sheaf.find(m0, {0})) == *d.sheaf.find(merged, {0}));
  CHECK_THROWS_AS(d.sheaf.act(f, p0), PreconditionError);
}

TEST_CASE("sheaf laws hold for every catalog formula") {
  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto mc = fixture::models(T, 2);
    const auto mg = build_model_groupoid(mc);
    const FormulaCatalog cat(mc, {2, 2, false, 10000});
    for (int k = 0; k <= 2; ++k)
      for (const auto& cls : cat.classes(k)) {
        const auto d = definable_sheaf(mg, cls.representative);
        CHECK(check_sheaf(d.sheaf).empty());
        CHECK(is_local_homeomorphism(d.sheaf));
      }
  }
}

TEST_CASE("stabilization is orbit closure") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const auto d = definable_sheaf(mg, formula(mc, "[x] top"));
  const PointSet s0 = section_image(d, {0});
  CHECK(s0.count() == 3);
  const PointSet st = stabilize(d.sheaf, s0);
  CHECK(st.count() == 5);
  const auto target = definable_sheaf(mg, formula(mc, "[x] top & exists y. x = y"));
  CHECK(st.count() == target.sheaf.size());
  CHECK(stabilize(d.sheaf, PointSet(5)).none());
  CHECK(stabilize(d.sheaf, st) == st);
  for (std::uint64_t m = 0; m < 32; ++m) {
    const PointSet s = oracle::bits_of(5, m);
    CHECK(stabilize(d.sheaf, s) == oracle::orbit_closure(d.sheaf, s));
  }
}

TEST_CASE("stable opens against exhaustive subsets") {
  for (const auto& T : {fixture::equality(), fixture::symmetric()}) {
    const auto mg = fixture::groupoid(T, 2);
    const auto d = definable_sheaf(mg, formula(*mg.models, "[x] top"));
    for (int k = 0; k <= 2; ++k) {
      const auto P = fiber_power(d.sheaf, k);
      if (P.size() > 16) continue;
      CHECK(check_sheaf(P).empty());
      CHECK(stable_open_sets(P) == oracle::stable_opens(P));
    }
  }
}

TEST_CASE("fibred powers of the generic sheaf of the empty theory") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto d = definable_sheaf(mg, formula(*mg.models, "[x] top"));
  const std::size_t points[] = {5, 5, 7, 11};
  const std::size_t stable[] = {3, 2, 3, 9};  // frozen from the exhaustive oracle
  for (int k = 0; k <= 3; ++k) {
    const auto P = fiber_power(d.sheaf, k);
    CHECK(P.size() == points[k]);
    const auto opens = stable_open_sets(P);
    CHECK(opens.size() == stable[k]);
    CHECK(opens == oracle::stable_opens(P));
  }
}

TEST_CASE("pullback along the identity") {
  const auto mg = fixture::groupoid(fixture::symmetric(), 2);
  const auto d = definable_sheaf(mg, formula(*mg.models, "[x] exists y. E(x, y)"));
  std::vector<int> objs, arrows;
  for (int i = 0; i < mg.models->model_count(); ++i) objs.push_back(i);
  for (int i = 0; i < mg.models->iso_count(); ++i) arrows.push_back(i);
  const auto p = pullback_sheaf({mg.groupoid, mg.groupoid, objs, arrows}, d.sheaf);
  REQUIRE(p.size() == d.sheaf.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const int pi = static_cast<int>(i);
    CHECK(p.proj(pi) == d.sheaf.proj(pi));
    CHECK(p.label(pi) == d.sheaf.label(pi));
  }
  CHECK(stable_open_sets(p) == stable_open_sets(d.sheaf));
}

TEST_CASE("open subgroupoids against exhaustive arrow sets") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto got = open_subgroupoids(*mg.groupoid);
  CHECK(got.size() == 9);
  CHECK(got == oracle::open_subgroupoids(*mg.groupoid));
  for (const auto& N : got) CHECK(check_site_data(*mg.groupoid, N).empty());
}

TEST_CASE("Moerdijk site objects") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const TopGroupoid& G = *mg.groupoid;

  const auto all = moerdijk_sheaf(mg.groupoid, G.arrows().full());
  CHECK(all.U.count() == 5);
  CHECK(all.sheaf.size() == 5);
  for (int x = 0; x < 5; ++x) CHECK(all.sheaf.fiber(x).size() == 1);
  const auto stable = site_stable_opens(all);
  CHECK(stable.size() == 3);
  CHECK(check_subobject_correspondence(all).empty());

  PointSet units(G.arrow_count());
  for (int x = 0; x < 5; ++x) units.set(G.unit(x));
  // Every neighbourhood of the unit at the empty model holds all arrows.
  CHECK(G.arrows().hull(units).count() == G.arrow_count());
  CHECK_THROWS_AS(moerdijk_sheaf(mg.groupoid, units), PreconditionError);

  const auto keep = moerdijk_sheaf(mg.groupoid, maps_to(mc, 0, 0));
  CHECK(keep.sheaf.size() == 5);
  CHECK(check_subobject_correspondence(keep).empty());

  PointSet bad(G.arrow_count());
  bad.set(0);
  bad.set(G.arrow_count() - 1);
  if (!check_site_data(G, bad).empty()) CHECK_THROWS_AS(moerdijk_sheaf(mg.groupoid, bad), PreconditionError);
}

TEST_CASE("lifting the parameter section") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const auto d = definable_sheaf(mg, formula(mc, "[x] top"));
  const PointSet U = basic_open_points(mc, {formula(mc, "[x] top"), {0}});
  const auto lift = lift_section(d.sheaf, U, parameter_section(d, {0}));
  CHECK(lift.well_defined);
  CHECK(lift.factors);
  CHECK(lift.report.is_isomorphism());
  CHECK(lift.site.representative.size() == 5);
  // N_s is the set of arrows out of U fixing [0].
  CHECK(lift.site.N == maps_to(mc, 0, 0));

  const auto t = definable_sheaf(mg, formula(mc, "[] top"));
  const auto tl = lift_section(t.sheaf, t.sheaf.base().objects().full(), parameter_section(t, {}));
  CHECK(tl.report.is_isomorphism());
}

TEST_CASE("symmetric rewriting of arrow neighbourhoods") {
  const auto mc = fixture::models(fixture::equality(), 2);
  const auto top = formula(*mc, "[x] top");
  const int m01 = find_label(*mc, "{0|1}");
  const int merged = find_label(*mc, "{0,1}");
  const BasicOpenI v{{top, {0}}, {}, {top, {1}}};
  const BasicOpenI w = rewrite_symmetric(*mc, v, m01);
  CHECK(is_symmetric(w));
  CHECK(w.dom.params == std::vector<int>{0, 1});
  const PointSet in_w = basic_open_arrows(*mc, w);
  CHECK(in_w.test(mc->identity(m01)));
  CHECK(in_w.is_subset_of(basic_open_arrows(*mc, v)));

  BasicOpenI send;
  send.preserve = {{0, 1}};
  const BasicOpenI s = rewrite_symmetric(*mc, send, merged);
  CHECK(is_symmetric(s));
  CHECK(basic_open_arrows(*mc, s).is_subset_of(basic_open_arrows(*mc, send)));
  CHECK(basic_open_arrows(*mc, s).test(mc->identity(merged)));

  const BasicOpenI sym = rewrite_symmetric(*mc, w, m01);
  CHECK(sym == w);
  CHECK_THROWS_AS(rewrite_symmetric(*mc, send, m01), PreconditionError);
}

TEST_CASE("density certificates over every site of the empty theory") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  int pass = 0, gated = 0, fail = 0;
  for (const auto& N : open_subgroupoids(*mg.groupoid)) {
    const auto site = moerdijk_sheaf(mg.groupoid, N);
    for (std::size_t e = 0; e < site.representative.size(); ++e) {
      const auto c = density_certificate(mg, site, static_cast<int>(e));
      if (c.outcome == Outcome::Pass) {
        ++pass;
        REQUIRE(c.preimage >= 0);
        // Some class lifts to the preimage point and lands on the element.
        bool hits = false;
        for (std::size_t i = 0; i < c.lifted_map.size(); ++i)
          if (c.lifted_map[i] == c.preimage && c.to_site[i] == static_cast<int>(e)) hits = true;
        CHECK(hits);
      } else if (c.outcome == Outcome::Gated) {
        ++gated;
      } else {
        ++fail;
      }
    }
  }
  CHECK(fail == 0);
  CHECK(pass == 27);
  CHECK(gated == 12);
}

TEST_CASE("stabilization of basic opens inside definable sheaves") {
  const auto mg = fixture::groupoid(fixture::equality(), 2);
  const auto& mc = *mg.models;
  const auto d = definable_sheaf(mg, formula(mc, "[x] top"));
  const auto rep = check_basic_stabilization(d, formula(mc, "[x, y] x = y"), {0});
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.stabilized == rep.expected);
  CHECK(rep.stabilized.count() == 5);
}
