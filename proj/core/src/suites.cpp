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

#include "geodual/suites.hpp"

#include <functional>
#include <map>

#include "geodual/error.hpp"

namespace geodual {

namespace {

struct Context {
  TheoryPtr theory;
  SuiteConfig config;
  std::shared_ptr<const ModelClass> mc;
  ModelGroupoid mg;

  Context(TheoryPtr T, const SuiteConfig& c) : theory(std::move(T)), config(c) {
    mc = std::make_shared<const ModelClass>(build_model_class(theory, IndexSet(c.index_size), c.limits));
    mg = build_model_groupoid(mc);
  }

  GroupoidOverS over_sets() const {
    auto m = mod_on_interpretation(Interpretation::from_equality(theory), IndexSet(config.index_size),
                                   config.limits);
    GroupoidOverS g;
    g.groupoid = mg.groupoid;
    g.models = mc;
    g.sets = m.target;
    g.over = m.morphism;
    g.over.source = mg.groupoid;
    return g;
  }
};

void fail(SuiteResult& r, std::string what) {
  r.outcome = Outcome::Fail;
  r.failures.push_back(std::move(what));
}

void gate(SuiteResult& r) {
  ++r.gated;
  if (r.outcome == Outcome::Pass) r.outcome = Outcome::Gated;
}

void absorb(SuiteResult& r, Outcome o) {
  ++r.checked;
  if (o == Outcome::Gated) gate(r);
}

std::vector<std::vector<int>> all_tuples(int n, int length) {
  std::vector<std::vector<int>> out;
  for (std::size_t r = 0; r < tuple_count(n, length); ++r) out.push_back(tuple_unrank(r, n, length));
  return out;
}

bool distinct(const std::vector<int>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) return false;
  return true;
}

void add_violations(SuiteResult& r, const std::string& where, const std::vector<std::string>& v) {
  for (const auto& s : v) fail(r, where + ": " + s);
}

SuiteResult groupoid_suite(const Context& c) {
  SuiteResult r;
  const TopGroupoid& G = *c.mg.groupoid;
  add_violations(r, "axioms", check_groupoid_axioms(G));
  add_violations(r, "continuity", check_continuity(G));
  if (!composition_continuous(G)) fail(r, "composition is not continuous");
  const auto g = c.over_sets();
  add_violations(r, "forgetful morphism", check_morphism(g.over));
  r.checked = G.object_count() + G.arrow_count();
  const bool d_open = domain_map_open(G), c_open = codomain_map_open(G);
  r.details = {{"objects", G.object_count()},
               {"arrows", G.arrow_count()},
               {"domain_open", d_open},
               {"codomain_open", c_open}};
  return r;
}

SuiteResult preimage_suite(const Context& c) {
  SuiteResult r;
  const int n = c.config.index_size;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ++r.checked;
      if (!structure_map_preimages(c.mg, a, b).holds())
        fail(r, "preimage identity fails at (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
  return r;
}

SuiteResult sobriety_suite(const Context& c) {
  SuiteResult r;
  const FinSpace X = model_space(*c.mc);
  const bool t0 = X.is_t0();
  const auto filters = cp_filters(X);
  r.details = {{"t0", t0}, {"filters", filters.size()}, {"models", c.mc->model_count()}};
  if (!t0) {
    r.details["note"] = "the truncated model space is not T0";
    gate(r);
    return r;
  }
  if (filters.size() != static_cast<std::size_t>(c.mc->model_count()))
    fail(r, "completely prime filters and models differ in number");
  for (int m = 0; m < c.mc->model_count(); ++m) {
    ++r.checked;
    const CPFilter F = neighborhood_filter(X, m);
    if (std::find(filters.begin(), filters.end(), F) == filters.end())
      fail(r, "neighbourhood filter of model " + std::to_string(m) + " is missing");
    if (!(filter_to_model(*c.mc, X, F) == c.mc->model(m)))
      fail(r, "filter of model " + std::to_string(m) + " does not round-trip");
  }
  return r;
}

SuiteResult star_suite(const Context& c) {
  SuiteResult r;
  std::size_t without_headroom = 0;
  const int n = c.config.index_size;
  for (const auto& M : c.mc->models()) {
    const auto dom = M.domain();
    for (int len = 0; len <= 2; ++len) {
      std::vector<std::vector<int>> as;
      for (auto& idx : all_tuples(static_cast<int>(dom.size()), len)) {
        std::vector<int> a;
        for (int i : idx) a.push_back(dom[i]);
        as.push_back(std::move(a));
      }
      for (const auto& a : as)
        for (const auto& b : all_tuples(n, len)) {
          if (!distinct(b)) continue;
          if (!star_headroom(M, a, b)) {
            ++without_headroom;
            continue;
          }
          ++r.checked;
          const StarResult s = star_lemma(M, a, b);
          bool ok = is_model(s.model, c.mc->theory()) && is_isomorphism(M, s.model, s.map);
          for (std::size_t i = 0; i < a.size() && ok; ++i)
            ok = s.model.block_of(b[i]) == s.map[M.block_of(a[i])];
          if (!ok) fail(r, "star construction fails on " + M.label());
        }
    }
  }
  r.details = {{"without_headroom", without_headroom}};
  return r;
}

SuiteResult openness_suite(const Context& c) {
  SuiteResult r;
  CatalogOptions opts;
  opts.max_context = c.config.kmax;
  opts.depth = c.config.depth;
  const FormulaCatalog cat(c.mc, opts);
  std::size_t uncovered = 0;
  for (const auto& v : basic_arrow_opens(cat, c.config.kmax)) {
    const OpennessCertificate cert = open_image_d(c.mg, v);
    absorb(r, cert.outcome);
    if (cert.outcome == Outcome::Fail)
      fail(r, to_string(c.mc->signature(), v) + ": " + cert.diagnosis);
    else if (cert.outcome == Outcome::Pass && cert.image != cert.covered)
      fail(r, to_string(c.mc->signature(), v) + ": certificate union differs from the image");
    if (cert.image != cert.covered) ++uncovered;
  }
  r.details = {{"opens", r.checked}, {"uncovered", uncovered}};
  return r;
}

SuiteResult stabilization_suite(const Context& c) {
  SuiteResult r;
  CatalogOptions opts;
  opts.max_context = 2;
  opts.depth = c.config.depth;
  const FormulaCatalog cat(c.mc, opts);
  for (const auto& phi : cat.classes(1)) {
    const DefinableSheaf d = definable_sheaf(c.mg, phi.representative);
    for (const auto& psi : cat.classes(2))
      for (int a = 0; a < c.config.index_size; ++a) {
        const auto rep = check_basic_stabilization(d, psi.representative, {a});
        absorb(r, rep.outcome);
        if (rep.outcome == Outcome::Fail)
          fail(r, to_string(c.mc->signature(), phi.representative) + " / " +
                      to_string(c.mc->signature(), psi.representative) + " at " + std::to_string(a));
      }
  }
  return r;
}

SuiteResult definables_suite(const Context& c) {
  SuiteResult r;
  CatalogOptions opts;
  opts.max_context = c.config.kmax;
  opts.depth = c.config.depth;
  const FormulaCatalog cat(c.mc, opts);
  for (int k = 0; k <= c.config.kmax; ++k)
    for (const auto& phi : cat.classes(k)) {
      const DefinableSheaf d = definable_sheaf(c.mg, phi.representative);
      for (const auto& a : all_tuples(c.config.index_size, k)) {
        const PointSet U = basic_open_points(*c.mc, {phi.representative, a});
        if (U.none()) continue;
        ++r.checked;
        const LiftedSection lift = lift_section(d.sheaf, U, parameter_section(d, a));
        const auto& rep = lift.report;
        const std::string where = to_string(c.mc->signature(), phi.representative);
        if (!lift.well_defined || !lift.factors || !rep.is_morphism() || !rep.injective) {
          fail(r, where + ": lifted section is not an injective morphism");
          continue;
        }
        if (rep.is_isomorphism()) continue;
        bool reachable = false;
        PointSet image(d.sheaf.size());
        for (int p : lift.map) image.set(p);
        for (std::size_t p = 0; p < d.sheaf.size(); ++p)
          if (!image.test(p) && point_reachable(d, static_cast<int>(p), a)) reachable = true;
        if (reachable)
          fail(r, where + ": a reachable point is missed");
        else if (!rep.surjective)
          gate(r);
        else
          fail(r, where + ": inverse is not continuous");
      }
    }
  return r;
}

SuiteResult density_suite(const Context& c) {
  SuiteResult r;
  const auto subs = open_subgroupoids(*c.mg.groupoid, c.config.limit);
  std::size_t non_etale = 0;
  for (const auto& N : subs) {
    const MoerdijkSite site = moerdijk_sheaf(c.mg.groupoid, N);
    if (!site.violations.empty()) ++non_etale;
    add_violations(r, "subobjects", check_subobject_correspondence(site));
    for (std::size_t e = 0; e < site.representative.size(); ++e) {
      const auto cert = density_certificate(c.mg, site, static_cast<int>(e));
      absorb(r, cert.outcome);
      if (cert.outcome == Outcome::Fail) fail(r, "element " + std::to_string(e) + ": " + cert.diagnosis);
    }
  }
  r.details = {{"subgroupoids", subs.size()}, {"non_etale_sites", non_etale}};
  return r;
}

SuiteResult sheaves_suite(const Context& c) {
  SuiteResult r;
  CatalogOptions opts;
  opts.max_context = c.config.kmax;
  opts.depth = c.config.depth;
  const FormulaCatalog cat(c.mc, opts);
  for (int k = 0; k <= c.config.kmax; ++k)
    for (const auto& phi : cat.classes(k)) {
      ++r.checked;
      add_violations(r, to_string(c.mc->signature(), phi.representative),
                     check_sheaf(definable_sheaf(c.mg, phi.representative).sheaf));
    }
  // The generic object pulled back to the models is <<x|T>>.
  const auto g = c.over_sets();
  const EquivariantSheaf pulled = pullback_sheaf(g.over, generic_sheaf(g.sets));
  const DefinableSheaf d = definable_sheaf(c.mg, {{0}, Formula::top()});
  ++r.checked;
  bool same = pulled.size() == d.sheaf.size();
  for (std::size_t p = 0; same && p < pulled.size(); ++p) {
    const int pi = static_cast<int>(p);
    auto q = d.sheaf.find(pulled.proj(pi), pulled.label(pi));
    same = q.has_value() &&
           pulled.total().neighborhood(p).count() == d.sheaf.total().neighborhood(*q).count();
  }
  if (same) {
    const auto a = stable_open_sets(pulled, c.config.limit);
    const auto b = stable_open_sets(d.sheaf, c.config.limit);
    same = a == b;
  }
  if (!same) fail(r, "pulled-back generic object differs from <<x|T>>");
  return r;
}

SuiteResult duality_suite(const Context& c, bool counit_only_triangles) {
  SuiteResult r;
  const auto g = c.over_sets();
  GroupoidOverS modT = g;
  const TriangleReport tri = check_triangle_identities(modT, c.config.kmax);
  ++r.checked;
  if (!tri.holds()) fail(r, "triangle identities fail");
  r.details["triangles"] = to_json(tri);
  if (counit_only_triangles) return r;
  const TheoryCategory C = syntactic_category(c.mc, c.config.kmax, c.config.depth);
  const RelationCategory F = form_functor(g, c.config.kmax);
  const CounitReport cr = counit(C, F);
  absorb(r, cr.outcome);
  if (cr.outcome == Outcome::Fail) fail(r, "counit: " + cr.diagnosis);
  if (!C.identities_present) {
    // Identity graphs live one length up; an unsaturated search may miss them.
    if (C.saturated.back())
      fail(r, "an object has no identity arrow");
    else
      gate(r);
  }
  const UnitMorphism eta = unit(F);
  ++r.checked;
  add_violations(r, "unit", eta.violations);
  r.details["counit"] = to_json(cr);
  r.details["unit"] = {{"objects", eta.morphism.on_objects}, {"arrows", eta.morphism.on_arrows}};
  return r;
}

SuiteResult naturality_suite(const Context& c) {
  SuiteResult r;
  ++r.checked;
  add_violations(r, "counit", check_counit_naturality(Interpretation::from_equality(c.theory),
                                                      IndexSet(c.config.index_size),
                                                      c.config.kmax, c.config.depth));
  // Each model, as a one-point groupoid over its carrier, maps into Mod(T).
  const auto g = c.over_sets();
  for (std::size_t x = 0; x < g.groupoid->object_count(); ++x) {
    const int xi = static_cast<int>(x);
    const auto pt = point_over_S(g.sets, g.over.on_objects[x]);
    const GroupoidMorphism h{pt.groupoid, g.groupoid, {xi}, {g.groupoid->unit(xi)}};
    ++r.checked;
    add_violations(r, "unit at model " + std::to_string(x),
                   check_unit_naturality(pt, g, h, c.config.kmax));
  }
  return r;
}

SuiteResult sem_suite(const Context& c) {
  SuiteResult r;
  const SemReport rep = check_sem_conditions(c.over_sets(), c.config.limit);
  r.checked = rep.subgroupoids;
  if (!rep.strong_fullness.holds) fail(r, "the forgetful morphism is not strongly full");
  if (!rep.condition_ii) fail(r, "an open subgroupoid has no neighbourhood witness");
  r.details = to_json(rep);
  r.details.erase("witnesses");
  return r;
}

SuiteResult coherent_suite(const Context& c) {
  SuiteResult r;
  const CoherentReport rep = coherent_check(c.over_sets(), c.config.kmax);
  r.checked = rep.frames.size() + rep.projections.size();
  if (!rep.condition_i) fail(r, "a frame of stable opens is not closed under meets and joins");
  if (!rep.condition_ii) fail(r, "projection pullback differs from the brute-force set");
  r.details = to_json(rep);
  return r;
}

using Runner = std::function<SuiteResult(const Context&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"groupoid", groupoid_suite},
      {"preimages", preimage_suite},
      {"sobriety", sobriety_suite},
      {"star", star_suite},
      {"openness", openness_suite},
      {"sheaves", sheaves_suite},
      {"stabilization", stabilization_suite},
      {"definables", definables_suite},
      {"density", density_suite},
      {"triangles", [](const Context& c) { return duality_suite(c, true); }},
      {"duality", [](const Context& c) { return duality_suite(c, false); }},
      {"naturality", naturality_suite},
      {"sem", sem_suite},
      {"coherent", coherent_suite},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "groupoid", "preimages",  "sobriety", "star",       "openness", "sheaves",  "stabilization",
      "definables", "density", "triangles", "duality", "naturality", "sem",      "coherent"};
  return names;
}

SuiteResult run_suite(const std::string& name, TheoryPtr T, const SuiteConfig& config) {
  auto it = runners().find(name);
  if (it == runners().end()) throw PreconditionError("unknown suite '" + name + "'");
  const Context c(std::move(T), config);
  SuiteResult r = it->second(c);
  r.name = name;
  return r;
}

Json to_json(const SuiteResult& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) failures.push_back(f);
  return {{"name", r.name},     {"outcome", outcome_name(r.outcome)},
          {"checked", r.checked}, {"gated", r.gated},
          {"failures", failures}, {"details", r.details}};
}

Outcome combine(const std::vector<SuiteResult>& results) {
  Outcome o = Outcome::Pass;
  for (const auto& r : results) {
    if (r.outcome == Outcome::Fail) return Outcome::Fail;
    if (r.outcome == Outcome::Gated) o = Outcome::Gated;
  }
  return o;
}

std::vector<BasicOpenI> basic_arrow_opens(const FormulaCatalog& catalog, int max_context) {
  const int n = catalog.model_class().index_set().size();
  std::vector<BasicOpenM> ends{BasicOpenM::trivial()};
  for (int k = 0; k <= max_context; ++k)
    for (const auto& cls : catalog.classes(k))
      for (const auto& a : all_tuples(n, k)) ends.push_back({cls.representative, a});
  std::vector<std::vector<std::pair<int, int>>> preserves{{}};
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) preserves.push_back({{b, c}});
  std::vector<BasicOpenI> out;
  for (const auto& d : ends)
    for (const auto& p : preserves)
      for (const auto& c : ends) out.push_back({d, p, c});
  return out;
}

}  // namespace geodual
