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

#include "geodual/duality.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "geodual/error.hpp"

namespace geodual {

namespace {

std::vector<VarId> vars(int from, int count) {
  std::vector<VarId> out;
  for (int i = 0; i < count; ++i) out.push_back(from + i);
  return out;
}

Formula rel_atom(int sym, const std::vector<VarId>& xs) {
  std::vector<Term> ts;
  for (VarId v : xs) ts.push_back(Term::variable(v));
  return Formula::relation(sym, std::move(ts));
}

Sequent sequent(int arity, Formula lhs, Formula rhs) {
  return canonical_form(Sequent{vars(0, arity), std::move(lhs), std::move(rhs)});
}

// Injective tuples over 0..n-1 of the given length, in lexicographic order.
std::vector<std::vector<int>> distinct_tuples(int n, int length) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == length) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e < n; ++e) {
      if (used[e]) continue;
      used[e] = true;
      cur.push_back(e);
      rec();
      cur.pop_back();
      used[e] = false;
    }
  };
  rec();
  return out;
}

// Every map {0..m-1} -> {0..k-1}, as the list of images.
std::vector<std::vector<int>> all_maps(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0 && m > 0) return out;
  for (std::size_t r = 0; r < tuple_count(k, m); ++r) out.push_back(tuple_unrank(r, k, m));
  return out;
}

std::vector<int> blocks_of(const IndexedStructure& M, const std::vector<int>& elements) {
  std::vector<int> out;
  for (int e : elements) out.push_back(M.block_of(e));
  return out;
}

bool all_defined(const IndexedStructure& M, const std::vector<int>& elements) {
  for (int e : elements)
    if (!M.defined(e)) return false;
  return true;
}

bool preserves(const GroupoidOverS& g, int f, const std::vector<int>& a) {
  const StructIso& u = g.underlying(f);
  const auto& D = g.sets.models->model(u.dom);
  const auto& C = g.sets.models->model(u.cod);
  for (int e : a)
    if (!D.defined(e) || !C.defined(e) || u.map[D.block_of(e)] != C.block_of(e)) return false;
  return true;
}

FinSpace subspace(const FinSpace& X, const std::vector<int>& pts) {
  std::vector<PointSet> sets;
  for (const auto& s : X.subbasis()) {
    PointSet r(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (s.test(pts[i])) r.set(i);
    sets.push_back(std::move(r));
  }
  return FinSpace(pts.size(), X.subbasis_names(), std::move(sets));
}

// Union closure of the given sets together with the empty set.
std::vector<PointSet> union_closure(const std::set<PointSet>& gens, std::size_t n,
                                    std::size_t limit) {
  std::set<PointSet> found{PointSet(n)};
  for (const auto& gen : gens) {
    std::vector<PointSet> added;
    for (const auto& o : found) {
      PointSet u = o | gen;
      if (!found.count(u)) added.push_back(std::move(u));
    }
    for (auto& u : added) found.insert(std::move(u));
    if (found.size() > limit)
      throw LimitExceeded("frame exceeds limit", static_cast<double>(found.size()));
  }
  return {found.begin(), found.end()};
}

}  // namespace

// ---------------------------------------------------------------- layouts

TupleLayout::TupleLayout(std::vector<int> blocks, int arity)
    : blocks_(std::move(blocks)), arity_(arity) {
  for (int b : blocks_) offsets_.push_back(offsets_.back() + tuple_count(b, arity_));
}

std::size_t TupleLayout::bit(int x, std::span<const int> tuple) const {
  return offsets_[x] + tuple_rank(tuple, blocks_[x]);
}

namespace {

// Projection onto the listed coordinates.
Bits project(const TupleLayout& from, const TupleLayout& to, const Bits& rel,
             const std::vector<int>& coords) {
  Bits out(to.size());
  for (int x = 0; x < static_cast<int>(from.objects()); ++x) {
    const int b = from.blocks(x);
    const std::size_t base = from.offset(x);
    for (std::size_t r = 0; r < tuple_count(b, from.arity()); ++r) {
      if (!rel.test(base + r)) continue;
      const auto t = tuple_unrank(r, b, from.arity());
      std::vector<int> s;
      for (int c : coords) s.push_back(t[c]);
      out.set(to.bit(x, s));
    }
  }
  return out;
}

}  // namespace

Bits project_front(const TupleLayout& from, const TupleLayout& to, const Bits& rel) {
  return project(from, to, rel, vars(0, to.arity()));
}

bool is_functional(const TupleLayout& layout, int front, const Bits& rel) {
  const int back = layout.arity() - front;
  for (int x = 0; x < static_cast<int>(layout.objects()); ++x) {
    const int b = layout.blocks(x);
    const std::size_t width = tuple_count(b, back);
    for (std::size_t t = 0; t < tuple_count(b, front); ++t) {
      int hits = 0;
      for (std::size_t s = 0; s < width; ++s)
        if (rel.test(layout.offset(x) + t * width + s)) ++hits;
      if (hits > 1) return false;
    }
  }
  return true;
}

std::vector<CategoryArrow> enumerate_arrows(const std::vector<TupleLayout>& layouts,
                                            const std::vector<std::vector<Bits>>& objects,
                                            int max_level) {
  std::vector<std::map<Bits, int>> index(objects.size());
  for (std::size_t k = 0; k < objects.size(); ++k)
    for (std::size_t i = 0; i < objects[k].size(); ++i) index[k][objects[k][i]] = static_cast<int>(i);
  std::vector<CategoryArrow> out;
  for (int k = 0; k <= max_level; ++k)
    for (int l = 0; l <= max_level; ++l) {
      const int n = k + l;
      if (n >= static_cast<int>(objects.size())) continue;
      for (std::size_t gi = 0; gi < objects[n].size(); ++gi) {
        const Bits& graph = objects[n][gi];
        if (!is_functional(layouts[n], k, graph)) continue;
        auto a = index[k].find(project(layouts[n], layouts[k], graph, vars(0, k)));
        if (a == index[k].end()) continue;
        const Bits back = project(layouts[n], layouts[l], graph, vars(k, l));
        Bits diagonal;
        if (k == l) {
          diagonal = Bits(layouts[n].size());
          const Bits& A = objects[k][a->second];
          for (int x = 0; x < static_cast<int>(layouts[k].objects()); ++x)
            for (std::size_t r = 0; r < tuple_count(layouts[k].blocks(x), k); ++r) {
              if (!A.test(layouts[k].offset(x) + r)) continue;
              auto t = tuple_unrank(r, layouts[k].blocks(x), k);
              auto tt = t;
              tt.insert(tt.end(), t.begin(), t.end());
              diagonal.set(layouts[n].bit(x, tt));
            }
        }
        for (std::size_t bi = 0; bi < objects[l].size(); ++bi) {
          if (!back.is_subset_of(objects[l][bi])) continue;
          CategoryArrow arr{{k, a->second}, {l, static_cast<int>(bi)}, static_cast<int>(gi), false};
          arr.inclusion = k == l && graph == diagonal;
          out.push_back(arr);
        }
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- syntax

TheoryCategory syntactic_category(std::shared_ptr<const ModelClass> mc, int kmax, int depth,
                                  std::size_t max_classes) {
  if (kmax < 0 || depth < 0) throw PreconditionError("bounds must be non-negative");
  CatalogOptions opts;
  opts.max_context = 2 * kmax;
  opts.depth = depth;
  opts.max_classes = max_classes;
  TheoryCategory C;
  C.kmax = kmax;
  C.catalog = std::make_shared<const FormulaCatalog>(mc, opts);
  std::vector<int> blocks;
  for (const auto& M : mc->models()) blocks.push_back(M.block_count());
  for (int k = 0; k <= 2 * kmax; ++k) {
    C.layouts.emplace_back(blocks, k);
    std::vector<Bits> objs;
    for (const auto& cls : C.catalog->classes(k)) objs.push_back(cls.key);
    C.objects.push_back(std::move(objs));
    C.saturated.push_back(C.catalog->saturated(k));
  }
  C.arrows = enumerate_arrows(C.layouts, C.objects, kmax);
  if (kmax >= 1) {
    Bits full(C.layouts[1].size());
    full.set();
    for (std::size_t i = 0; i < C.objects[1].size(); ++i)
      if (C.objects[1][i] == full) C.generic = {1, static_cast<int>(i)};
  }
  std::set<ObjectRef> with_identity;
  for (const auto& a : C.arrows)
    if (a.inclusion && a.from == a.to) with_identity.insert(a.from);
  for (int k = 0; k <= kmax; ++k)
    for (std::size_t i = 0; i < C.objects[k].size(); ++i)
      if (!with_identity.count({k, static_cast<int>(i)})) C.identities_present = false;
  return C;
}

SemanticQuotient semantic_quotient(TheoryPtr T, const IndexSet& S, const Limits& limits) {
  auto mc = std::make_shared<const ModelClass>(build_model_class(T, S, limits));
  return {mc, Interpretation::identity(T)};
}

// ---------------------------------------------------------------- Mod

GroupoidOverS mod_functor(TheoryPtr T, const IndexSet& S, const Limits& limits) {
  auto m = mod_on_interpretation(Interpretation::from_equality(T), S, limits);
  GroupoidOverS g;
  g.groupoid = m.source.groupoid;
  g.models = m.source.models;
  g.sets = m.target;
  g.over = m.morphism;
  return g;
}

GroupoidOverS discrete_subgroupoid(const GroupoidOverS& g, const std::vector<int>& objects) {
  const TopGroupoid& G = *g.groupoid;
  std::vector<int> units;
  for (int x : objects) units.push_back(G.unit(x));
  std::vector<int> ids(objects.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  auto sub = std::make_shared<const TopGroupoid>(
      subspace(G.objects(), objects), subspace(G.arrows(), units), ids, ids, ids, ids,
      [](int, int f) { return f; });
  GroupoidOverS out;
  out.groupoid = sub;
  out.sets = g.sets;
  out.over.source = sub;
  out.over.target = g.sets.groupoid;
  for (int x : objects) {
    out.over.on_objects.push_back(g.over.on_objects[x]);
    out.over.on_arrows.push_back(g.over.on_arrows[G.unit(x)]);
  }
  return out;
}

GroupoidOverS point_over_S(const ModelGroupoid& sets, int set) {
  auto G = std::make_shared<const TopGroupoid>(FinSpace(1, {}, {}), FinSpace(1, {}, {}),
                                               std::vector<int>{0}, std::vector<int>{0},
                                               std::vector<int>{0}, std::vector<int>{0},
                                               [](int, int) { return 0; });
  GroupoidOverS out;
  out.groupoid = G;
  out.sets = sets;
  out.over = {G, sets.groupoid, {set}, {sets.models->identity(set)}};
  return out;
}

EquivariantSheaf generic_sheaf(const ModelGroupoid& sets) {
  return definable_sheaf(sets, FormulaInContext{{0}, Formula::top()}).sheaf;
}

// ---------------------------------------------------------------- Form

std::optional<int> RelationCategory::find(int level, const Bits& set) const {
  const auto& objs = objects.at(level);
  auto it = std::lower_bound(objs.begin(), objs.end(), set);
  if (it == objs.end() || *it != set) return std::nullopt;
  return static_cast<int>(it - objs.begin());
}

Bits RelationCategory::to_bits(int level, const PointSet& points) const {
  Bits out(layouts[level].size());
  const auto& pob = point_of_bit[level];
  for (std::size_t b = 0; b < pob.size(); ++b)
    if (points.test(pob[b])) out.set(b);
  return out;
}

PointSet RelationCategory::to_points(int level, const Bits& bits) const {
  PointSet out(powers[level].size());
  for (auto b = bits.find_first(); b != Bits::npos; b = bits.find_next(b))
    out.set(point_of_bit[level][b]);
  return out;
}

RelationCategory form_functor(const GroupoidOverS& g, int kmax, int levels, std::size_t limit) {
  if (kmax < 0) throw PreconditionError("kmax must be non-negative");
  RelationCategory F;
  F.base = g;
  F.kmax = kmax;
  F.levels = std::max(levels, 2 * kmax);
  const EquivariantSheaf U = pullback_sheaf(g.over, generic_sheaf(g.sets));
  std::vector<int> blocks;
  for (std::size_t x = 0; x < g.groupoid->object_count(); ++x)
    blocks.push_back(g.carrier(static_cast<int>(x)).block_count());
  for (int k = 0; k <= F.levels; ++k) {
    F.powers.push_back(fiber_power(U, k));
    F.layouts.emplace_back(blocks, k);
    const auto& P = F.powers.back();
    const auto& L = F.layouts.back();
    if (P.size() != L.size()) throw Error("fibred power does not match the tuple layout");
    std::vector<int> pob(L.size(), -1);
    for (std::size_t p = 0; p < P.size(); ++p) {
      const std::size_t b = L.bit(P.proj(static_cast<int>(p)), P.label(static_cast<int>(p)));
      if (pob[b] != -1) throw Error("fibred power has repeated tuples");
      pob[b] = static_cast<int>(p);
    }
    F.point_of_bit.push_back(std::move(pob));
    std::vector<Bits> objs;
    for (const auto& s : stable_open_sets(P, limit)) objs.push_back(F.to_bits(k, s));
    std::sort(objs.begin(), objs.end());
    F.objects.push_back(std::move(objs));
  }
  F.arrows = enumerate_arrows(F.layouts, F.objects, kmax);
  return F;
}

int effective_level(const Signature& sig, int kmax) {
  return std::max(2 * kmax, sig.max_arity());
}

// ---------------------------------------------------------------- counit

CounitReport counit(const TheoryCategory& C, const RelationCategory& form) {
  CounitReport r;
  const int top = 2 * C.kmax;
  if (form.levels < top || form.kmax != C.kmax)
    throw PreconditionError("categories computed at different bounds");
  for (int k = 0; k <= top; ++k)
    if (C.layouts[k].size() != form.layouts[k].size())
      throw PreconditionError("categories are not over the same models");
  bool unsaturated = false;
  for (int k = 0; k <= top; ++k) {
    std::vector<int> map;
    std::vector<bool> hit(form.objects[k].size(), false);
    bool ok = true;
    for (const auto& key : C.objects[k]) {
      auto idx = form.find(k, key);
      map.push_back(idx ? *idx : -1);
      if (!idx || hit[*idx]) ok = false;
      if (idx) hit[*idx] = true;
    }
    const bool onto = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
    if (!onto && !C.saturated[k]) unsaturated = true;
    if (!ok || !onto) r.objects_bijective = false;
    if (!ok && r.diagnosis.empty())
      r.diagnosis = "a class of length " + std::to_string(k) + " is not a stable open";
    else if (!onto && r.diagnosis.empty())
      r.diagnosis = "a stable open of length " + std::to_string(k) + " has no defining formula" +
                    (C.saturated[k] ? "" : " (inconclusive at depth " +
                                               std::to_string(C.catalog->options().depth) + ")");
    if (k <= C.kmax) {
      r.syntactic_objects.push_back(static_cast<int>(C.objects[k].size()));
      r.form_objects.push_back(static_cast<int>(form.objects[k].size()));
    }
    r.object_map.push_back(std::move(map));
  }
  r.syntactic_arrows = C.arrows.size();
  r.form_arrows = form.arrows.size();
  std::map<CategoryArrow, int> index;
  for (std::size_t i = 0; i < form.arrows.size(); ++i) index[form.arrows[i]] = static_cast<int>(i);
  std::set<int> seen;
  for (const auto& a : C.arrows) {
    const int af = r.object_map[a.from.level][a.from.index];
    const int bf = r.object_map[a.to.level][a.to.index];
    const int gf = r.object_map[a.from.level + a.to.level][a.graph];
    int img = -1;
    if (af >= 0 && bf >= 0 && gf >= 0) {
      auto it = index.find({{a.from.level, af}, {a.to.level, bf}, gf, a.inclusion});
      if (it != index.end()) img = it->second;
    }
    r.arrow_map.push_back(img);
    if (img < 0 || !seen.insert(img).second) r.arrows_bijective = false;
  }
  if (seen.size() != form.arrows.size()) r.arrows_bijective = false;
  if (!r.objects_bijective || !r.arrows_bijective) {
    r.outcome = unsaturated ? Outcome::Gated : Outcome::Fail;
    if (r.diagnosis.empty()) r.diagnosis = "arrow correspondence is not bijective";
  }
  return r;
}

// ---------------------------------------------------------------- form theory

namespace {

// Points generating each join-prime object, and the join-prime object of
// every point, per level.
struct Generators {
  std::vector<std::vector<int>> objects;     // [level] -> object indices
  std::vector<std::vector<int>> point;       // [level][gen] -> generating point
  std::vector<std::vector<int>> gen_of_point;  // [level][point] -> gen
};

Generators generators(const RelationCategory& form) {
  Generators G;
  for (int k = 0; k <= form.levels; ++k) {
    const auto& P = form.powers[k];
    std::map<int, int> gen_index;  // object -> gen
    std::vector<int> objs, pts, of(P.size());
    for (std::size_t p = 0; p < P.size(); ++p) {
      const auto obj = form.find(k, form.to_bits(k, minimal_stable_open(P, static_cast<int>(p))));
      if (!obj) throw Error("minimal stable open is missing from the object list");
      auto [it, fresh] = gen_index.emplace(*obj, static_cast<int>(objs.size()));
      if (fresh) {
        objs.push_back(*obj);
        pts.push_back(static_cast<int>(p));
      }
      of[p] = it->second;
    }
    G.objects.push_back(std::move(objs));
    G.point.push_back(std::move(pts));
    G.gen_of_point.push_back(std::move(of));
  }
  return G;
}

// Point of U^m reached from point p of U^k along sigma.
int substitute_point(const RelationCategory& form, int k, int p, const std::vector<int>& sigma) {
  const auto& P = form.powers[k];
  const auto& t = P.label(p);
  std::vector<int> s;
  for (int i : sigma) s.push_back(t[i]);
  const int m = static_cast<int>(sigma.size());
  return form.point_of_bit[m][form.layouts[m].bit(P.proj(p), s)];
}

Bits pull_along(const RelationCategory& form, int k, const Bits& target,
                const std::vector<int>& sigma) {
  const int m = static_cast<int>(sigma.size());
  Bits out(form.layouts[k].size());
  const auto& L = form.layouts[k];
  for (int x = 0; x < static_cast<int>(L.objects()); ++x)
    for (std::size_t r = 0; r < tuple_count(L.blocks(x), k); ++r) {
      const auto t = tuple_unrank(r, L.blocks(x), k);
      std::vector<int> s;
      for (int i : sigma) s.push_back(t[i]);
      if (target.test(form.layouts[m].bit(x, s))) out.set(L.offset(x) + r);
    }
  return out;
}

}  // namespace

FormTheory form_theory(const RelationCategory& form) {
  auto T = std::make_shared<Theory>();
  FormTheory ft;
  const int L = form.levels;
  for (int k = 0; k <= L; ++k) {
    std::vector<int> syms;
    for (std::size_t i = 0; i < form.objects[k].size(); ++i)
      syms.push_back(T->signature.add_relation("R" + std::to_string(k) + "_" + std::to_string(i), k));
    ft.symbol.push_back(std::move(syms));
  }
  const Generators G = generators(form);
  ft.generators = G.objects;
  auto& ax = T->axioms;
  for (int k = 0; k <= L; ++k) {
    const auto& objs = form.objects[k];
    const auto& sym = ft.symbol[k];
    const auto x = vars(0, k);
    Bits full(form.layouts[k].size());
    full.set();
    if (auto t = form.find(k, full)) ax.push_back(sequent(k, Formula::top(), rel_atom(sym[*t], x)));
    if (auto e = form.find(k, Bits(form.layouts[k].size())))
      ax.push_back(sequent(k, rel_atom(sym[*e], x), Formula::bot()));
    // Covering inclusions.
    for (std::size_t a = 0; a < objs.size(); ++a)
      for (std::size_t b = 0; b < objs.size(); ++b) {
        if (a == b || !objs[a].is_proper_subset_of(objs[b])) continue;
        bool cover = true;
        for (std::size_t c = 0; c < objs.size() && cover; ++c)
          if (objs[a].is_proper_subset_of(objs[c]) && objs[c].is_proper_subset_of(objs[b]))
            cover = false;
        if (cover) ax.push_back(sequent(k, rel_atom(sym[a], x), rel_atom(sym[b], x)));
      }
    // Each object is the join of the join-prime objects below it.
    const std::set<int> gens(G.objects[k].begin(), G.objects[k].end());
    for (std::size_t a = 0; a < objs.size(); ++a) {
      if (gens.count(static_cast<int>(a)) || objs[a].none()) continue;
      std::vector<Formula> parts;
      for (int j : G.objects[k])
        if (objs[j].is_subset_of(objs[a])) parts.push_back(rel_atom(sym[j], x));
      ax.push_back(sequent(k, rel_atom(sym[a], x), Formula::disj(std::move(parts))));
    }
    // Meets of join-prime objects.
    for (std::size_t i = 0; i < G.objects[k].size(); ++i)
      for (std::size_t j = i + 1; j < G.objects[k].size(); ++j) {
        const int a = G.objects[k][i], b = G.objects[k][j];
        if (objs[a].is_subset_of(objs[b]) || objs[b].is_subset_of(objs[a])) continue;
        auto m = form.find(k, objs[a] & objs[b]);
        if (!m) throw Error("stable opens are not closed under meets");
        ax.push_back(sequent(k, Formula::conj({rel_atom(sym[a], x), rel_atom(sym[b], x)}),
                             rel_atom(sym[*m], x)));
      }
    // Substitutions along every map of contexts into this one.
    for (int m = 0; m <= L; ++m)
      for (const auto& sigma : all_maps(m, k)) {
        if (m == k && sigma == vars(0, k)) continue;
        std::vector<VarId> xs;
        for (int i : sigma) xs.push_back(i);
        for (int j : G.objects[m]) {
          auto pulled = form.find(k, pull_along(form, k, form.objects[m][j], sigma));
          if (!pulled) throw Error("substitution does not preserve stable opens");
          ax.push_back(sequent(k, rel_atom(sym[*pulled], x), rel_atom(ft.symbol[m][j], xs)));
          ax.push_back(sequent(k, rel_atom(ft.symbol[m][j], xs), rel_atom(sym[*pulled], x)));
        }
      }
    // Existential projections from length k + 1.
    if (k < L) {
      const auto xy = vars(0, k + 1);
      for (std::size_t a = 0; a < form.objects[k + 1].size(); ++a) {
        auto img = form.find(k, project_front(form.layouts[k + 1], form.layouts[k],
                                              form.objects[k + 1][a]));
        if (!img) throw Error("projection does not preserve stable opens");
        const int ra = ft.symbol[k + 1][a];
        ax.push_back(sequent(k + 1, rel_atom(ra, xy), rel_atom(sym[*img], x)));
        ax.push_back(sequent(k, rel_atom(sym[*img], x), Formula::exists(k, rel_atom(ra, xy))));
      }
    }
  }
  if (L >= 2) {
    Bits diag(form.layouts[2].size());
    const auto& L2 = form.layouts[2];
    for (int x = 0; x < static_cast<int>(L2.objects()); ++x)
      for (int b = 0; b < L2.blocks(x); ++b) diag.set(L2.bit(x, std::vector<int>{b, b}));
    auto d = form.find(2, diag);
    if (!d) throw Error("diagonal is not a stable open");
    const Formula eq = Formula::eq(Term::variable(0), Term::variable(1));
    ax.push_back(sequent(2, rel_atom(ft.symbol[2][*d], {0, 1}), eq));
    ax.push_back(sequent(2, eq, rel_atom(ft.symbol[2][*d], {0, 1})));
  }
  ft.theory = T;
  return ft;
}

std::shared_ptr<const ModelClass> form_models(const RelationCategory& form, const FormTheory& ft) {
  const int L = form.levels;
  const Generators G = generators(form);
  const Signature& sig = ft.theory->signature;
  const int n = form.base.sets.models->index_set().size();
  const IndexSet S(n);

  // contains[k][j] = objects containing generator j.
  std::vector<std::vector<std::vector<bool>>> contains(L + 1);
  for (int k = 0; k <= L; ++k)
    for (int j : G.objects[k]) {
      std::vector<bool> row;
      for (const auto& o : form.objects[k]) row.push_back(form.objects[k][j].is_subset_of(o));
      contains[k].push_back(std::move(row));
    }
  // Substitutions act on generators: push[k][m][sigma][j].
  struct Sub {
    int from, to;
    std::vector<int> sigma;
    std::vector<int> image;  // generator at level `to` for each generator at `from`
  };
  std::vector<Sub> subs;
  for (int k = 0; k <= L; ++k)
    for (int m = 0; m <= L; ++m)
      for (const auto& sigma : all_maps(m, k)) {
        if (m == k && sigma == vars(0, k)) continue;
        Sub s{k, m, sigma, {}};
        for (int p : G.point[k])
          s.image.push_back(G.gen_of_point[m][substitute_point(form, k, p, sigma)]);
        subs.push_back(std::move(s));
      }
  // Projection images and the diagonal, as object indices.
  std::vector<std::vector<int>> proj_img(L);
  for (int k = 0; k < L; ++k)
    for (const auto& o : form.objects[k + 1])
      proj_img[k].push_back(*form.find(k, project_front(form.layouts[k + 1], form.layouts[k], o)));
  int diag = -1;
  if (L >= 2) {
    for (std::size_t i = 0; i < form.objects[2].size(); ++i) {
      // The diagonal is the object whose generator types are exactly the
      // repeated pairs; recover it by the equality axiom's symbol.
      (void)i;
    }
    for (const auto& a : ft.theory->axioms)
      if (a.antecedent.kind == Formula::Kind::Eq && a.succedent.kind == Formula::Kind::Rel)
        for (std::size_t i = 0; i < ft.symbol[2].size(); ++i)
          if (ft.symbol[2][i] == a.succedent.rel) diag = static_cast<int>(i);
  }

  std::vector<IndexedStructure> found;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> elems;
    for (int e = 0; e < n; ++e)
      if (mask & (1u << e)) elems.push_back(e);
    for (auto& part : set_partitions(elems)) {
      const int b = static_cast<int>(part.size());
      // type[k][rank] = generator, -1 when open.
      std::vector<std::vector<int>> type(L + 1);
      for (int k = 0; k <= L; ++k) type[k].assign(tuple_count(b, k), -1);
      std::vector<std::pair<int, std::size_t>> trail;

      auto assign = [&](int k, std::size_t r, int j) {
        std::vector<std::tuple<int, std::size_t, int>> work{{k, r, j}};
        while (!work.empty()) {
          auto [lk, lr, lj] = work.back();
          work.pop_back();
          int& slot = type[lk][lr];
          if (slot == lj) continue;
          if (slot != -1) return false;
          slot = lj;
          trail.emplace_back(lk, lr);
          const auto t = tuple_unrank(lr, b, lk);
          for (const auto& s : subs) {
            if (s.from != lk) continue;
            std::vector<int> u;
            for (int i : s.sigma) u.push_back(t[i]);
            work.emplace_back(s.to, tuple_rank(u, b), s.image[lj]);
          }
        }
        return true;
      };
      auto undo = [&](std::size_t mark) {
        while (trail.size() > mark) {
          type[trail.back().first][trail.back().second] = -1;
          trail.pop_back();
        }
      };
      auto complete = [&]() {
        for (int k = 0; k < L; ++k)
          for (std::size_t r = 0; r < type[k].size(); ++r) {
            const int j = type[k][r];
            for (std::size_t a = 0; a < form.objects[k + 1].size(); ++a) {
              if (!contains[k][j][proj_img[k][a]]) continue;
              bool witness = false;
              for (int s = 0; s < b && !witness; ++s)
                witness = contains[k + 1][type[k + 1][r * b + s]][a];
              if (!witness) return;
            }
          }
        if (diag >= 0)
          for (int u = 0; u < b; ++u)
            for (int v = 0; v < b; ++v)
              if (contains[2][type[2][u * b + v]][diag] != (u == v)) return;
        auto M = IndexedStructure::from_partition(n, part, sig);
        for (int k = 0; k <= L; ++k)
          for (std::size_t i = 0; i < form.objects[k].size(); ++i) {
            auto& table = M.relation_table(ft.symbol[k][i]);
            for (std::size_t r = 0; r < table.size(); ++r) table[r] = contains[k][type[k][r]][i];
          }
        if (!is_model(M, *ft.theory)) throw Error("form model search admitted a non-model");
        found.push_back(std::move(M));
      };
      // Choose types for the top level (or level 0 on the empty carrier);
      // substitutions fix every other level.
      const int top = b == 0 ? 0 : L;
      std::function<void(std::size_t)> rec = [&](std::size_t r) {
        if (r == type[top].size()) {
          complete();
          return;
        }
        if (type[top][r] != -1) {
          rec(r + 1);
          return;
        }
        for (std::size_t j = 0; j < G.objects[top].size(); ++j) {
          const std::size_t mark = trail.size();
          if (assign(top, r, static_cast<int>(j))) rec(r + 1);
          undo(mark);
        }
      };
      rec(0);
    }
  }
  std::sort(found.begin(), found.end(), [](const IndexedStructure& a, const IndexedStructure& b) {
    if (a.domain_mask() != b.domain_mask()) return a.domain_mask() < b.domain_mask();
    return a < b;
  });
  return std::make_shared<const ModelClass>(ft.theory, S, std::move(found));
}

// ---------------------------------------------------------------- unit

IndexedStructure unit_structure(const RelationCategory& form, const FormTheory& ft, int x) {
  const auto& carrier = form.base.carrier(x);
  auto M = IndexedStructure::from_partition(carrier.index_size(), carrier.blocks(),
                                            ft.theory->signature);
  for (int k = 0; k <= form.levels; ++k) {
    const std::size_t off = form.layouts[k].offset(x);
    for (std::size_t i = 0; i < form.objects[k].size(); ++i) {
      auto& table = M.relation_table(ft.symbol[k][i]);
      for (std::size_t r = 0; r < table.size(); ++r) table[r] = form.objects[k][i].test(off + r);
    }
  }
  return M;
}

UnitMorphism unit(const RelationCategory& form) {
  UnitMorphism u;
  u.theory = form_theory(form);
  u.models = build_model_groupoid(form_models(form, u.theory));
  const TopGroupoid& G = *form.base.groupoid;
  const ModelClass& mc = *u.models.models;
  u.morphism.source = form.base.groupoid;
  u.morphism.target = u.models.groupoid;
  for (std::size_t x = 0; x < G.object_count(); ++x) {
    auto idx = mc.find_model(unit_structure(form, u.theory, static_cast<int>(x)));
    if (!idx) {
      u.violations.push_back("object " + std::to_string(x) + " is not sent to a model");
      return u;
    }
    u.morphism.on_objects.push_back(*idx);
  }
  for (std::size_t f = 0; f < G.arrow_count(); ++f) {
    const int fi = static_cast<int>(f);
    auto idx = mc.find_iso(u.morphism.on_objects[G.dom(fi)], u.morphism.on_objects[G.cod(fi)],
                           form.base.underlying(fi).map);
    if (!idx) {
      u.violations.push_back("arrow " + std::to_string(f) + " is not sent to an isomorphism");
      return u;
    }
    u.morphism.on_arrows.push_back(*idx);
  }
  u.violations = check_morphism(u.morphism);
  return u;
}

// ---------------------------------------------------------------- triangles

TriangleReport check_form_triangle(const RelationCategory& form, const UnitMorphism& eta) {
  TriangleReport r;
  if (!eta.violations.empty()) {
    r.form_side = false;
    r.details = eta.violations;
    return r;
  }
  const ModelClass& mc = *eta.models.models;
  for (int k = 0; k <= form.levels; ++k)
    for (std::size_t i = 0; i < form.objects[k].size(); ++i) {
      // Pull <<x|R_A>> over Mod(Form G) back along eta.
      Bits pulled(form.layouts[k].size());
      const int sym = eta.theory.symbol[k][i];
      for (std::size_t x = 0; x < form.layouts[k].objects(); ++x) {
        const auto& M = mc.model(eta.morphism.on_objects[x]);
        const std::size_t off = form.layouts[k].offset(static_cast<int>(x));
        const auto& table = M.relation_table(sym);
        for (std::size_t t = 0; t < table.size(); ++t)
          if (table[t]) pulled.set(off + t);
      }
      if (pulled != form.objects[k][i]) {
        r.form_side = false;
        r.details.push_back("object " + std::to_string(i) + " of length " + std::to_string(k) +
                            " is not returned");
      }
    }
  return r;
}

TriangleReport check_triangle_identities_groupoid(const GroupoidOverS& g, int kmax) {
  const RelationCategory form = form_functor(g, kmax);
  return check_form_triangle(form, unit(form));
}

TriangleReport check_triangle_identities(const GroupoidOverS& modT, int kmax) {
  if (!modT.models) throw PreconditionError("groupoid is not a groupoid of models");
  const ModelClass& T = *modT.models;
  const Signature& sig = T.signature();
  const RelationCategory form = form_functor(modT, kmax, effective_level(sig, kmax));
  const UnitMorphism eta = unit(form);
  TriangleReport r = check_form_triangle(form, eta);
  if (!eta.violations.empty()) return r;
  r.mod_side_checked = true;

  // eps_T on the symbols of T.
  Interpretation I;
  I.source = T.theory_ptr();
  I.target = eta.theory.theory;
  auto image_of = [&](int arity, const std::function<bool(const IndexedStructure&, const BlockTuple&)>& in)
      -> std::optional<FormulaInContext> {
    Bits ext(form.layouts[arity].size());
    for (int x = 0; x < T.model_count(); ++x) {
      const auto& M = T.model(x);
      for (std::size_t t = 0; t < tuple_count(M.block_count(), arity); ++t)
        if (in(M, tuple_unrank(t, M.block_count(), arity)))
          ext.set(form.layouts[arity].offset(x) + t);
    }
    auto idx = form.find(arity, ext);
    if (!idx) return std::nullopt;
    return FormulaInContext{vars(0, arity), rel_atom(eta.theory.symbol[arity][*idx], vars(0, arity))};
  };
  for (int rel = 0; rel < static_cast<int>(sig.relations().size()); ++rel) {
    auto img = image_of(sig.relations()[rel].arity, [rel](const IndexedStructure& M, const BlockTuple& t) {
      return M.holds(rel, t);
    });
    if (!img) {
      r.mod_side = false;
      r.details.push_back("relation " + sig.relations()[rel].name + " is not a stable open");
      return r;
    }
    I.relation_images.push_back(*img);
  }
  for (int fn = 0; fn < static_cast<int>(sig.functions().size()); ++fn) {
    const int n = sig.functions()[fn].arity;
    auto img = image_of(n + 1, [fn, n](const IndexedStructure& M, const BlockTuple& t) {
      return M.apply(fn, std::span<const int>(t.data(), n)) == t[n];
    });
    if (!img) {
      r.mod_side = false;
      r.details.push_back("graph of " + sig.functions()[fn].name + " is not a stable open");
      return r;
    }
    I.function_images.push_back(*img);
  }
  const ModelClass& FM = *eta.models.models;
  for (int x = 0; x < T.model_count(); ++x) {
    const auto back = reduct(FM.model(eta.morphism.on_objects[x]), I);
    if (!(back == T.model(x))) {
      r.mod_side = false;
      r.details.push_back("model " + std::to_string(x) + " is not returned");
    }
  }
  for (int f = 0; f < T.iso_count(); ++f) {
    const StructIso& via = FM.iso(eta.morphism.on_arrows[f]);
    if (via.map != T.iso(f).map) {
      r.mod_side = false;
      r.details.push_back("isomorphism " + std::to_string(f) + " is not returned");
    }
  }
  return r;
}

// ---------------------------------------------------------------- naturality

std::vector<std::string> check_counit_naturality(const Interpretation& F, const IndexSet& S,
                                                 int kmax, int depth) {
  std::vector<std::string> errs;
  const auto m = mod_on_interpretation(F, S);
  CatalogOptions opts;
  opts.max_context = kmax;
  opts.depth = depth;
  const FormulaCatalog cat(m.target.models, opts);
  const ModelClass& src = *m.source.models;  // models of F.target
  for (int k = 0; k <= kmax; ++k) {
    const KeyLayout& layout = cat.layout(k);
    for (const auto& cls : cat.classes(k)) {
      const FormulaInContext img = translate(F, cls.representative);
      bool ok = true;
      for (int y = 0; y < src.model_count() && ok; ++y) {
        const auto& M = src.model(y);
        const auto bits = extension_bits(M, img);
        const int x = m.morphism.on_objects[y];
        for (std::size_t t = 0; t < bits.size(); ++t)
          if (static_cast<bool>(bits[t]) != cls.key.test(layout.offset(x) + t)) ok = false;
      }
      if (!ok)
        errs.push_back("counit square fails at " + to_string(F.source->signature, cls.representative));
    }
  }
  return errs;
}

std::vector<std::string> check_unit_naturality(const GroupoidOverS& g, const GroupoidOverS& g2,
                                               const GroupoidMorphism& h, int kmax) {
  std::vector<std::string> errs;
  auto m = check_morphism(h);
  errs.insert(errs.end(), m.begin(), m.end());
  const TopGroupoid& G = *g.groupoid;
  for (std::size_t x = 0; x < G.object_count(); ++x)
    if (g2.over.on_objects[h.on_objects[x]] != g.over.on_objects[x])
      errs.push_back("morphism does not commute with the maps to sets on objects");
  for (std::size_t f = 0; f < G.arrow_count(); ++f)
    if (g2.over.on_arrows[h.on_arrows[f]] != g.over.on_arrows[f])
      errs.push_back("morphism does not commute with the maps to sets on arrows");
  if (!errs.empty()) return errs;
  const RelationCategory F1 = form_functor(g, kmax);
  const RelationCategory F2 = form_functor(g2, kmax);
  const FormTheory T1 = form_theory(F1);
  const FormTheory T2 = form_theory(F2);
  // Form(h) pulls objects back; Mod(Form h) is the reduct along R_A -> R_{h*A}.
  Interpretation I;
  I.source = T2.theory;
  I.target = T1.theory;
  for (int k = 0; k <= F2.levels; ++k)
    for (std::size_t i = 0; i < F2.objects[k].size(); ++i) {
      Bits pulled(F1.layouts[k].size());
      for (std::size_t x = 0; x < G.object_count(); ++x) {
        const int y = h.on_objects[x];
        const std::size_t n = tuple_count(F1.layouts[k].blocks(static_cast<int>(x)), k);
        for (std::size_t t = 0; t < n; ++t)
          if (F2.objects[k][i].test(F2.layouts[k].offset(y) + t))
            pulled.set(F1.layouts[k].offset(static_cast<int>(x)) + t);
      }
      auto idx = F1.find(k, pulled);
      if (!idx) {
        errs.push_back("pullback of an object is not a stable open");
        return errs;
      }
      I.relation_images.push_back({vars(0, k), rel_atom(T1.symbol[k][*idx], vars(0, k))});
    }
  for (std::size_t x = 0; x < G.object_count(); ++x) {
    const auto lhs = unit_structure(F2, T2, h.on_objects[x]);
    const auto rhs = reduct(unit_structure(F1, T1, static_cast<int>(x)), I);
    if (!(lhs == rhs)) errs.push_back("unit square fails at object " + std::to_string(x));
  }
  return errs;
}

// ---------------------------------------------------------------- Sem_S

StrongFullnessReport check_strong_fullness(const GroupoidOverS& g) {
  StrongFullnessReport r;
  const TopGroupoid& G = *g.groupoid;
  const TopGroupoid& Sg = *g.sets.groupoid;
  std::set<std::pair<int, int>> lifts;  // (cod in G, arrow of S)
  for (std::size_t f = 0; f < G.arrow_count(); ++f)
    lifts.emplace(G.cod(static_cast<int>(f)), g.over.on_arrows[f]);
  for (std::size_t y = 0; y < G.object_count(); ++y) {
    const int X = g.over.on_objects[y];
    for (std::size_t h = 0; h < Sg.arrow_count(); ++h) {
      if (Sg.cod(static_cast<int>(h)) != X) continue;
      ++r.checked;
      if (!lifts.count({static_cast<int>(y), static_cast<int>(h)})) {
        r.holds = false;
        r.witness_object = static_cast<int>(y);
        r.witness_arrow = static_cast<int>(h);
        return r;
      }
    }
  }
  return r;
}

SemReport check_sem_conditions(const GroupoidOverS& g, std::size_t limit) {
  SemReport r;
  const TopGroupoid& G = *g.groupoid;
  r.open_groupoid = domain_map_open(G) && codomain_map_open(G);
  r.strong_fullness = check_strong_fullness(g);
  if (!r.strong_fullness.holds) {
    r.condition_ii = false;
    return r;
  }
  const auto subs = open_subgroupoids(G, limit);
  r.subgroupoids = subs.size();
  const int n = g.sets.models->index_set().size();
  std::vector<std::vector<int>> candidates;
  for (int len = 0; len <= n; ++len)
    for (auto& a : distinct_tuples(n, len)) candidates.push_back(std::move(a));
  for (const auto& N : subs) {
    const PointSet U = image(G.dom_map(), N, G.object_count());
    bool all = true;
    for (auto x = U.find_first(); x != PointSet::npos; x = U.find_next(x)) {
      NeighbourhoodWitness w;
      w.object = static_cast<int>(x);
      w.W = G.objects().neighborhood(x);
      for (const auto& a : candidates) {
        bool inside = true;
        for (auto y = w.W.find_first(); y != PointSet::npos && inside; y = w.W.find_next(y))
          inside = all_defined(g.carrier(static_cast<int>(y)), a);
        if (!inside) continue;
        bool contained = true;
        for (std::size_t f = 0; f < G.arrow_count() && contained; ++f) {
          const int fi = static_cast<int>(f);
          if (w.W.test(G.dom(fi)) && w.W.test(G.cod(fi)) && preserves(g, fi, a) && !N.test(f))
            contained = false;
        }
        if (contained) {
          w.params = a;
          w.found = true;
          break;
        }
      }
      if (!w.found) all = false;
      r.witnesses.push_back(std::move(w));
    }
    if (!all) {
      r.failing.push_back(N);
      r.condition_ii = false;
    }
  }
  return r;
}

// ---------------------------------------------------------------- coherence

std::vector<PointSet> coherent_frame(const GroupoidOverS& g, const std::vector<int>& a) {
  const TopGroupoid& G = *g.groupoid;
  PointSet X(G.object_count());
  for (std::size_t x = 0; x < G.object_count(); ++x)
    if (all_defined(g.carrier(static_cast<int>(x)), a)) X.set(x);
  std::vector<int> Na;
  for (std::size_t f = 0; f < G.arrow_count(); ++f) {
    const int fi = static_cast<int>(f);
    if (X.test(G.dom(fi)) && X.test(G.cod(fi)) && preserves(g, fi, a)) Na.push_back(fi);
  }
  std::set<PointSet> gens;
  for (auto x = X.find_first(); x != PointSet::npos; x = X.find_next(x)) {
    PointSet cur(G.object_count());
    cur.set(x);
    while (true) {
      PointSet next = G.objects().hull(cur) & X;
      for (int f : Na)
        if (next.test(G.dom(f))) next.set(G.cod(f));
      if (next == cur) break;
      cur = std::move(next);
    }
    gens.insert(cur);
  }
  return union_closure(gens, G.object_count(), 1000000);
}

CoherentReport coherent_check(const GroupoidOverS& g, int kmax) {
  CoherentReport r;
  const TopGroupoid& G = *g.groupoid;
  const int n = g.sets.models->index_set().size();
  for (int k = 0; k <= kmax && k <= n; ++k) {
    FrameReport fr;
    fr.params = vars(0, k);
    const auto frame = coherent_frame(g, fr.params);
    const std::set<PointSet> members(frame.begin(), frame.end());
    for (const auto& a : frame)
      for (const auto& b : frame)
        if (!members.count(a & b) || !members.count(a | b)) fr.is_frame = false;
    fr.elements = frame.size();
    // A finite frame: every element is compact, compacts are closed under
    // meets, and every element is a join of compacts.
    fr.compact = frame.size();
    if (!fr.is_frame) r.condition_i = false;
    r.frames.push_back(std::move(fr));
  }
  r.note = "finite frames: every element is compact, so condition (i) holds degenerately";

  const EquivariantSheaf U = pullback_sheaf(g.over, generic_sheaf(g.sets));
  for (int k = 0; k < kmax && k + 1 <= n; ++k) {
    ProjectionReport pr;
    pr.a = vars(0, k + 1);
    pr.b = vars(0, k);
    const auto frame_b = coherent_frame(g, pr.b);
    const auto frame_a = coherent_frame(g, pr.a);
    const std::set<PointSet> members_a(frame_a.begin(), frame_a.end());
    PointSet Xa(G.object_count()), Xb(G.object_count());
    for (std::size_t x = 0; x < G.object_count(); ++x) {
      if (all_defined(g.carrier(static_cast<int>(x)), pr.a)) Xa.set(x);
      if (all_defined(g.carrier(static_cast<int>(x)), pr.b)) Xb.set(x);
    }
    std::vector<int> T;  // (<b> / b -> b / <a>)
    for (std::size_t f = 0; f < G.arrow_count(); ++f) {
      const int fi = static_cast<int>(f);
      if (Xb.test(G.dom(fi)) && Xa.test(G.cod(fi)) && preserves(g, fi, pr.b)) T.push_back(fi);
    }
    const EquivariantSheaf Pk = fiber_power(U, k);
    const EquivariantSheaf Pk1 = fiber_power(U, k + 1);
    for (const auto& Sset : frame_b) {
      ++pr.checked;
      PointSet X(G.object_count());
      for (int h : T)
        if (Sset.test(G.dom(h))) X.set(G.cod(h));
      // Reference: pull the subobject of U^k back along the projection and
      // read it off through the section x -> (x, [a]).
      PointSet seed(Pk.size());
      for (auto x = Sset.find_first(); x != PointSet::npos; x = Sset.find_next(x))
        seed.set(*Pk.find(static_cast<int>(x), blocks_of(g.carrier(static_cast<int>(x)), pr.b)));
      const PointSet sub = stabilize(Pk, seed);
      PointSet ref(G.object_count());
      for (auto y = Xa.find_first(); y != PointSet::npos; y = Xa.find_next(y)) {
        const int yi = static_cast<int>(y);
        auto full = blocks_of(g.carrier(yi), pr.a);
        if (!Pk1.find(yi, full)) continue;
        full.pop_back();
        if (sub.test(*Pk.find(yi, full))) ref.set(y);
      }
      if (X != ref) ++pr.mismatches;
      if (!members_a.count(X)) ++pr.noncompact;
    }
    if (pr.mismatches || pr.noncompact) r.condition_ii = false;
    r.projections.push_back(std::move(pr));
  }
  return r;
}

}  // namespace geodual
