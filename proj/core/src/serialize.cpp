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

#include "geodual/serialize.hpp"

namespace geodual {

namespace {

Json symbols(const std::vector<Symbol>& syms) {
  Json out = Json::array();
  for (const auto& s : syms) out.push_back({{"name", s.name}, {"arity", s.arity}});
  return out;
}

Json strings(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

}  // namespace

Json to_json(const PointSet& s) {
  Json out = Json::array();
  for (int m : members(s)) out.push_back(m);
  return out;
}

Json to_json(const Signature& sig) {
  return {{"relations", symbols(sig.relations())}, {"functions", symbols(sig.functions())}};
}

Json to_json(const Theory& t) {
  Json axioms = Json::array();
  for (const auto& a : t.axioms) axioms.push_back(to_string(t.signature, a));
  return {{"signature", to_json(t.signature)}, {"axioms", axioms}};
}

Json to_json(const IndexedStructure& M, const Signature& sig) {
  Json rels = Json::object();
  for (int r = 0; r < M.relation_count(); ++r) {
    Json rows = Json::array();
    const int n = M.relation_arity(r);
    const auto& table = M.relation_table(r);
    for (std::size_t t = 0; t < table.size(); ++t)
      if (table[t]) rows.push_back(tuple_unrank(t, M.block_count(), n));
    rels[sig.relations()[r].name] = rows;
  }
  Json funs = Json::object();
  for (int f = 0; f < M.function_count(); ++f) funs[sig.functions()[f].name] = M.function_table(f);
  return {{"label", M.label()}, {"blocks", M.blocks()}, {"relations", rels}, {"functions", funs}};
}

Json to_json(const ModelClass& mc) {
  Json models = Json::array();
  for (const auto& M : mc.models()) models.push_back(to_json(M, mc.signature()));
  Json isos = Json::array();
  for (const auto& f : mc.isos()) isos.push_back({{"dom", f.dom}, {"cod", f.cod}, {"map", f.map}});
  return {{"index_size", mc.index_set().size()},
          {"model_count", mc.model_count()},
          {"iso_count", mc.iso_count()},
          {"models", models},
          {"isos", isos}};
}

Json to_json(const FinSpace& X) {
  Json sub = Json::array();
  for (std::size_t i = 0; i < X.subbasis().size(); ++i)
    sub.push_back({{"name", X.subbasis_names()[i]}, {"points", to_json(X.subbasis()[i])}});
  Json nb = Json::array();
  for (std::size_t p = 0; p < X.size(); ++p) nb.push_back(to_json(X.neighborhood(p)));
  return {{"points", X.size()}, {"subbasis", sub}, {"neighborhoods", nb}};
}

Json to_json(const TopGroupoid& g) {
  Json comp = Json::array();
  for (std::size_t f = 0; f < g.arrow_count(); ++f)
    for (int h : g.arrows_from(g.cod(static_cast<int>(f))))
      comp.push_back({h, static_cast<int>(f), g.compose(h, static_cast<int>(f))});
  return {{"objects", to_json(g.objects())},
          {"arrows", to_json(g.arrows())},
          {"dom", g.dom_map()},
          {"cod", g.cod_map()},
          {"unit", g.unit_map()},
          {"inverse", g.inverse_map()},
          {"compose", comp}};
}

Json to_json(const EquivariantSheaf& s) {
  Json fibers = Json::array();
  for (std::size_t x = 0; x < s.base().object_count(); ++x) {
    Json pts = Json::array();
    for (int p : s.fiber(static_cast<int>(x))) pts.push_back({{"point", p}, {"label", s.label(p)}});
    fibers.push_back(pts);
  }
  Json action = Json::array();
  for (std::size_t f = 0; f < s.base().arrow_count(); ++f) {
    Json row = Json::array();
    for (int p : s.fiber(s.base().dom(static_cast<int>(f)))) row.push_back(s.act(static_cast<int>(f), p));
    action.push_back(row);
  }
  return {{"size", s.size()},
          {"projection", s.projection()},
          {"fibers", fibers},
          {"action", action},
          {"total", to_json(s.total())}};
}

Json to_json(const DefinableSheaf& d) {
  Json out = to_json(d.sheaf);
  out["formula"] = to_string(d.models->signature(), d.formula);
  return out;
}

Json to_json(const GroupoidMorphism& m) {
  return {{"on_objects", m.on_objects}, {"on_arrows", m.on_arrows}};
}

Json to_json(const OpennessCertificate& c, const Signature& sig) {
  Json cert = Json::array();
  for (const auto& b : c.certificate) cert.push_back(to_string(sig, b));
  return {{"image", to_json(c.image)},   {"certificate", cert},
          {"covered", to_json(c.covered)}, {"witnessed", c.witnessed},
          {"gated", c.gated},             {"outcome", outcome_name(c.outcome)},
          {"diagnosis", c.diagnosis}};
}

Json to_json(const DensityCertificate& c, const Signature& sig) {
  return {{"outcome", outcome_name(c.outcome)},
          {"element", c.element},
          {"neighborhood", to_string(sig, c.neighborhood)},
          {"params", c.params},
          {"lifted_map", c.lifted_map},
          {"to_site", c.to_site},
          {"preimage", c.preimage},
          {"unreached", c.unreached},
          {"diagnosis", c.diagnosis}};
}

Json to_json(const MoerdijkSite& site) {
  return {{"N", to_json(site.N)},
          {"U", to_json(site.U)},
          {"classes", site.representative.size()},
          {"representatives", site.representative},
          {"class_of_arrow", site.class_of_arrow},
          {"violations", strings(site.violations)}};
}

Json to_json(const CounitReport& r) {
  return {{"syntactic_objects", r.syntactic_objects},
          {"form_objects", r.form_objects},
          {"syntactic_arrows", r.syntactic_arrows},
          {"form_arrows", r.form_arrows},
          {"object_map", r.object_map},
          {"arrow_map", r.arrow_map},
          {"objects_bijective", r.objects_bijective},
          {"arrows_bijective", r.arrows_bijective},
          {"outcome", outcome_name(r.outcome)},
          {"diagnosis", r.diagnosis}};
}

Json to_json(const TriangleReport& r) {
  return {{"form_side", r.form_side},
          {"mod_side", r.mod_side},
          {"mod_side_checked", r.mod_side_checked},
          {"holds", r.holds()},
          {"details", strings(r.details)}};
}

Json to_json(const StrongFullnessReport& r) {
  Json out = {{"holds", r.holds}, {"checked", r.checked}};
  if (!r.holds) out["witness"] = {{"object", r.witness_object}, {"arrow", r.witness_arrow}};
  return out;
}

Json to_json(const SemReport& r) {
  Json wit = Json::array();
  for (const auto& w : r.witnesses)
    wit.push_back({{"object", w.object}, {"W", to_json(w.W)}, {"params", w.params}, {"found", w.found}});
  Json failing = Json::array();
  for (const auto& N : r.failing) failing.push_back(to_json(N));
  return {{"open_groupoid", r.open_groupoid},
          {"strong_fullness", to_json(r.strong_fullness)},
          {"subgroupoids", r.subgroupoids},
          {"condition_ii", r.condition_ii},
          {"failing", failing},
          {"witnesses", wit},
          {"holds", r.holds()}};
}

Json to_json(const CoherentReport& r) {
  Json frames = Json::array();
  for (const auto& f : r.frames)
    frames.push_back({{"params", f.params},
                      {"elements", f.elements},
                      {"compact", f.compact},
                      {"is_frame", f.is_frame}});
  Json proj = Json::array();
  for (const auto& p : r.projections)
    proj.push_back({{"a", p.a},
                    {"b", p.b},
                    {"checked", p.checked},
                    {"mismatches", p.mismatches},
                    {"noncompact", p.noncompact}});
  return {{"condition_i", r.condition_i},
          {"condition_ii", r.condition_ii},
          {"frames", frames},
          {"projections", proj},
          {"note", r.note}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace geodual
