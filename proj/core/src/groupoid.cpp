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

#include "geodual/groupoid.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "geodual/error.hpp"

namespace geodual {

TopGroupoid::TopGroupoid(FinSpace objects, FinSpace arrows, std::vector<int> dom,
                         std::vector<int> cod, std::vector<int> unit,
                         std::vector<int> inverse, const Compose& compose)
    : objects_(std::move(objects)),
      arrows_(std::move(arrows)),
      dom_(std::move(dom)),
      cod_(std::move(cod)),
      unit_(std::move(unit)),
      inverse_(std::move(inverse)) {
  const std::size_t na = arrows_.size();
  if (dom_.size() != na || cod_.size() != na || inverse_.size() != na ||
      unit_.size() != objects_.size())
    throw PreconditionError("structure map sizes do not match spaces");
  out_.assign(objects_.size(), {});
  out_pos_.assign(na, 0);
  for (std::size_t f = 0; f < na; ++f) {
    out_pos_[f] = static_cast<int>(out_[dom_[f]].size());
    out_[dom_[f]].push_back(static_cast<int>(f));
  }
  comp_.resize(na);
  for (std::size_t f = 0; f < na; ++f) {
    const auto& next = out_[cod_[f]];
    comp_[f].reserve(next.size());
    for (int g : next) comp_[f].push_back(compose(g, static_cast<int>(f)));
  }
}

int TopGroupoid::compose(int g, int f) const {
  if (dom_[g] != cod_[f]) return -1;
  return comp_[f][out_pos_[g]];
}

std::vector<std::string> check_groupoid_axioms(const TopGroupoid& g) {
  std::vector<std::string> errs;
  const int na = static_cast<int>(g.arrow_count());
  const int no = static_cast<int>(g.object_count());
  auto fail = [&](const std::string& law, int a) {
    if (errs.size() < 20) errs.push_back(law + " fails at " + std::to_string(a));
  };
  for (int x = 0; x < no; ++x) {
    const int e = g.unit(x);
    if (e < 0 || e >= na || g.dom(e) != x || g.cod(e) != x) fail("d(e x) = c(e x) = x", x);
  }
  for (int f = 0; f < na; ++f) {
    const int i = g.inverse(f);
    if (g.inverse(i) != f) fail("i(i f) = f", f);
    if (g.dom(i) != g.cod(f) || g.cod(i) != g.dom(f)) fail("d i = c, c i = d", f);
    if (g.compose(g.unit(g.cod(f)), f) != f) fail("e(c f) after f = f", f);
    if (g.compose(f, g.unit(g.dom(f))) != f) fail("f after e(d f) = f", f);
    if (g.compose(i, f) != g.unit(g.dom(f))) fail("i(f) after f = e(d f)", f);
    if (g.compose(f, i) != g.unit(g.cod(f))) fail("f after i(f) = e(c f)", f);
    for (int h : g.arrows_from(g.cod(f))) {
      const int hf = g.compose(h, f);
      if (hf < 0 || g.dom(hf) != g.dom(f) || g.cod(hf) != g.cod(h)) {
        fail("d, c of composite", f);
        continue;
      }
      for (int k : g.arrows_from(g.cod(h)))
        if (g.compose(k, hf) != g.compose(g.compose(k, h), f)) fail("associativity", f);
    }
  }
  return errs;
}

bool composition_continuous(const TopGroupoid& g) {
  const int na = static_cast<int>(g.arrow_count());
  const FinSpace& A = g.arrows();
  for (int f = 0; f < na; ++f)
    for (int h : g.arrows_from(g.cod(f))) {
      const PointSet& target = A.neighborhood(g.compose(h, f));
      const PointSet& nf = A.neighborhood(f);
      const PointSet& nh = A.neighborhood(h);
      for (auto f2 = nf.find_first(); f2 != PointSet::npos; f2 = nf.find_next(f2))
        for (auto h2 = nh.find_first(); h2 != PointSet::npos; h2 = nh.find_next(h2)) {
          const int c = g.compose(static_cast<int>(h2), static_cast<int>(f2));
          if (c >= 0 && !target.test(c)) return false;
        }
    }
  return true;
}

std::vector<std::string> check_continuity(const TopGroupoid& g) {
  std::vector<std::string> errs;
  if (!is_continuous(g.arrows(), g.objects(), g.dom_map())) errs.push_back("d not continuous");
  if (!is_continuous(g.arrows(), g.objects(), g.cod_map())) errs.push_back("c not continuous");
  if (!is_continuous(g.objects(), g.arrows(), g.unit_map())) errs.push_back("e not continuous");
  if (!is_continuous(g.arrows(), g.arrows(), g.inverse_map()))
    errs.push_back("i not continuous");
  if (!composition_continuous(g)) errs.push_back("m not continuous");
  return errs;
}

bool domain_map_open(const TopGroupoid& g) {
  return is_open_map(g.arrows(), g.objects(), g.dom_map());
}

bool codomain_map_open(const TopGroupoid& g) {
  return is_open_map(g.arrows(), g.objects(), g.cod_map());
}

ModelGroupoid build_model_groupoid(std::shared_ptr<const ModelClass> mc) {
  std::vector<int> dom, cod, unit, inverse;
  for (const auto& f : mc->isos()) {
    dom.push_back(f.dom);
    cod.push_back(f.cod);
  }
  for (int m = 0; m < mc->model_count(); ++m) unit.push_back(mc->identity(m));
  for (int f = 0; f < mc->iso_count(); ++f) inverse.push_back(mc->inverse(f));
  const ModelClass* raw = mc.get();
  auto g = std::make_shared<const TopGroupoid>(
      model_space(*mc), iso_space(*mc), std::move(dom), std::move(cod),
      std::move(unit), std::move(inverse),
      [raw](int a, int b) { return raw->compose(a, b); });
  return {std::move(mc), std::move(g)};
}

ModelGroupoid build_S_groupoid(const IndexSet& S, const Limits& limits) {
  auto mc = std::make_shared<const ModelClass>(
      build_model_class(std::make_shared<const Theory>(), S, limits));
  return build_model_groupoid(std::move(mc));
}

PreimageReport structure_map_preimages(const ModelGroupoid& mg, int a, int b) {
  const ModelClass& mc = *mg.models;
  const TopGroupoid& g = *mg.groupoid;
  PreimageReport r;
  const PointSet target = maps_to(mc, a, b);
  r.inverse_preimage = preimage(g.inverse_map(), target);
  r.inverse_expected = maps_to(mc, b, a);
  r.unit_preimage = preimage(g.unit_map(), target);
  r.unit_expected = basic_open_points(
      mc, {{{0, 1}, Formula::eq(Term::variable(0), Term::variable(1))}, {a, b}});
  const int n = mc.index_set().size();
  std::vector<PointSet> into(n), from(n);
  for (int c = 0; c < n; ++c) {
    into[c] = maps_to(mc, c, b);
    from[c] = maps_to(mc, a, c);
  }
  for (int f = 0; f < static_cast<int>(g.arrow_count()); ++f)
    for (int h : g.arrows_from(g.cod(f))) {
      if (target.test(g.compose(h, f))) r.compose_preimage.emplace_back(h, f);
      for (int c = 0; c < n; ++c)
        if (into[c].test(h) && from[c].test(f)) {
          r.compose_expected.emplace_back(h, f);
          break;
        }
    }
  std::sort(r.compose_preimage.begin(), r.compose_preimage.end());
  std::sort(r.compose_expected.begin(), r.compose_expected.end());
  return r;
}

std::vector<std::string> check_morphism(const GroupoidMorphism& m) {
  std::vector<std::string> errs;
  const TopGroupoid& G = *m.source;
  const TopGroupoid& H = *m.target;
  if (m.on_objects.size() != G.object_count() || m.on_arrows.size() != G.arrow_count()) {
    errs.push_back("morphism tables have the wrong size");
    return errs;
  }
  auto fail = [&](const std::string& law, int a) {
    if (errs.size() < 20) errs.push_back(law + " fails at " + std::to_string(a));
  };
  for (int x = 0; x < static_cast<int>(G.object_count()); ++x)
    if (m.on_arrows[G.unit(x)] != H.unit(m.on_objects[x])) fail("f1 e = e f0", x);
  for (int f = 0; f < static_cast<int>(G.arrow_count()); ++f) {
    const int img = m.on_arrows[f];
    if (H.dom(img) != m.on_objects[G.dom(f)]) fail("d f1 = f0 d", f);
    if (H.cod(img) != m.on_objects[G.cod(f)]) fail("c f1 = f0 c", f);
    if (m.on_arrows[G.inverse(f)] != H.inverse(img)) fail("f1 i = i f1", f);
    for (int h : G.arrows_from(G.cod(f)))
      if (m.on_arrows[G.compose(h, f)] != H.compose(m.on_arrows[h], img))
        fail("f1 preserves composition", f);
  }
  if (!is_continuous(G.objects(), H.objects(), m.on_objects)) errs.push_back("f0 not continuous");
  if (!is_continuous(G.arrows(), H.arrows(), m.on_arrows)) errs.push_back("f1 not continuous");
  return errs;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Gated: return "gated";
    case Outcome::Fail: return "fail";
  }
  return "?";
}

// ---------------------------------------------------------------- openness

namespace {

std::vector<VarId> range(int from, int count) {
  std::vector<VarId> v(count);
  for (int i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

}  // namespace

OpennessCertificate open_image_d(const ModelGroupoid& mg, const BasicOpenI& v) {
  const ModelClass& mc = *mg.models;
  OpennessCertificate out;
  const PointSet arrows = basic_open_arrows(mc, v);
  out.image = PointSet(mc.model_count());
  for (auto f = arrows.find_first(); f != PointSet::npos; f = arrows.find_next(f))
    out.image.set(mc.iso(static_cast<int>(f)).dom);

  // Distinct codomain parameters, with the codomain formula re-indexed.
  const int p = v.dom.formula.arity();
  std::vector<int> dd;
  std::vector<VarId> cod_vars;
  for (int e : v.cod.params) {
    auto it = std::find(dd.begin(), dd.end(), e);
    if (it == dd.end()) {
      cod_vars.push_back(p + static_cast<int>(dd.size()));
      dd.push_back(e);
    } else {
      cod_vars.push_back(p + static_cast<int>(it - dd.begin()));
    }
  }
  const int r = static_cast<int>(dd.size());
  const int q = static_cast<int>(v.preserve.size());
  std::vector<Formula> parts{instantiate(v.dom.formula, range(0, p)),
                             instantiate(v.cod.formula, cod_vars)};
  // Repeated preservation targets force equal sources.
  std::vector<int> first_with_target(q);
  for (int i = 0; i < q; ++i) {
    first_with_target[i] = i;
    for (int j = 0; j < i; ++j)
      if (v.preserve[j].second == v.preserve[i].second) {
        first_with_target[i] = j;
        parts.push_back(Formula::eq(Term::variable(p + r + j), Term::variable(p + r + i)));
        break;
      }
  }
  const FormulaInContext chi =
      canonical_form(FormulaInContext{range(0, p + r + q), Formula::conj(std::move(parts))});

  std::set<std::vector<int>> seen;
  for (auto fi = arrows.find_first(); fi != PointSet::npos; fi = arrows.find_next(fi)) {
    const StructIso& f = mc.iso(static_cast<int>(fi));
    const auto& K = mc.model(f.dom);
    const auto& N = mc.model(f.cod);
    std::vector<int> params = v.dom.params;
    for (int e : dd) {
      int k = -1;
      for (int i = 0; i < q && k < 0; ++i)
        if (v.preserve[i].second == e) k = v.preserve[i].first;
      if (k < 0) {
        const int target = N.block_of(e);
        for (int s : K.domain())
          if (f.map[K.block_of(s)] == target) {
            k = s;
            break;
          }
      }
      params.push_back(k);
    }
    for (auto [b, c] : v.preserve) params.push_back(b);
    if (seen.insert(params).second) out.certificate.push_back({chi, params});
  }

  out.covered = PointSet(mc.model_count());
  for (const auto& w : out.certificate) out.covered |= basic_open_points(mc, w);

  if (!out.image.is_subset_of(out.covered)) {
    out.outcome = Outcome::Fail;
    out.diagnosis = "a domain of an arrow in V lies outside the certificate";
    return out;
  }

  // Re-derive membership in d(V) for every covered model by the star
  // construction.
  bool unexplained = false;
  for (int m : members(out.covered)) {
    const auto& K = mc.model(m);
    bool witnessed = false;
    bool gated = false;
    for (const auto& w : out.certificate) {
      if (!model_in(mc, m, w)) continue;
      std::vector<int> sources, targets;
      auto add = [&](int src, int tgt) {
        if (std::find(targets.begin(), targets.end(), tgt) != targets.end()) return;
        sources.push_back(src);
        targets.push_back(tgt);
      };
      for (int j = 0; j < r; ++j) add(w.params[p + j], dd[j]);
      for (int i = 0; i < q; ++i) add(w.params[p + r + i], v.preserve[i].second);
      if (!star_headroom(K, sources, targets)) {
        gated = true;
        continue;
      }
      auto star = star_lemma(K, sources, targets);
      auto L = mc.find_model(star.model);
      auto g = L ? mc.find_iso(m, *L, star.map) : std::nullopt;
      if (g && arrows.test(*g)) {
        witnessed = true;
        break;
      }
      out.outcome = Outcome::Fail;
      out.diagnosis = "star construction left V at model " + std::to_string(m);
      return out;
    }
    if (witnessed) {
      ++out.witnessed;
    } else if (gated) {
      ++out.gated;
      if (!out.image.test(m)) unexplained = true;
    }
  }
  if (out.covered == out.image) {
    out.outcome = Outcome::Pass;
  } else if (unexplained) {
    out.outcome = Outcome::Gated;
    out.diagnosis = "certificate exceeds d(V) only where the star construction lacks headroom";
  } else {
    out.outcome = Outcome::Fail;
    out.diagnosis = "certificate union differs from d(V)";
  }
  return out;
}

// ---------------------------------------------------------------- Mod on arrows

InterpretationMorphism mod_on_interpretation(const Interpretation& F, const IndexSet& S,
                                             const Limits& limits) {
  auto src = std::make_shared<const ModelClass>(build_model_class(F.target, S, limits));
  auto tgt = std::make_shared<const ModelClass>(build_model_class(F.source, S, limits));
  InterpretationMorphism out{build_model_groupoid(src), build_model_groupoid(tgt), {}};
  out.morphism.source = out.source.groupoid;
  out.morphism.target = out.target.groupoid;
  for (const auto& M : src->models()) {
    auto idx = tgt->find_model(reduct(M, F));
    if (!idx) throw PreconditionError("reduct along the interpretation is not a model");
    out.morphism.on_objects.push_back(*idx);
  }
  for (const auto& f : src->isos()) {
    auto idx = tgt->find_iso(out.morphism.on_objects[f.dom], out.morphism.on_objects[f.cod],
                             f.map);
    if (!idx) throw PreconditionError("bijection is not an isomorphism of reducts");
    out.morphism.on_arrows.push_back(*idx);
  }
  return out;
}

std::vector<std::string> check_translation_preimages(const Interpretation& F,
                                                     const InterpretationMorphism& m,
                                                     const std::vector<BasicOpenM>& opens) {
  std::vector<std::string> errs;
  for (const auto& b : opens) {
    const PointSet lhs =
        preimage(m.morphism.on_objects, basic_open_points(*m.target.models, b));
    const PointSet rhs =
        basic_open_points(*m.source.models, {translate(F, b.formula), b.params});
    if (lhs != rhs) errs.push_back("preimage identity fails for " +
                                   to_string(F.source->signature, b));
  }
  return errs;
}

}  // namespace geodual
