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

#include "geodual/sheaf.hpp"

#include <map>
#include <set>

#include "geodual/error.hpp"

namespace geodual {

EquivariantSheaf::EquivariantSheaf(GroupoidPtr base, FinSpace total,
                                   std::vector<int> proj,
                                   std::vector<std::vector<int>> labels,
                                   const Action& act)
    : base_(std::move(base)),
      total_(std::move(total)),
      proj_(std::move(proj)),
      labels_(std::move(labels)) {
  if (total_.size() != proj_.size() || labels_.size() != proj_.size())
    throw PreconditionError("sheaf tables differ in size");
  fibers_.assign(base_->object_count(), {});
  fiber_pos_.assign(proj_.size(), 0);
  for (std::size_t p = 0; p < proj_.size(); ++p) {
    if (proj_[p] < 0 || proj_[p] >= static_cast<int>(base_->object_count()))
      throw PreconditionError("projection outside the base");
    fiber_pos_[p] = static_cast<int>(fibers_[proj_[p]].size());
    fibers_[proj_[p]].push_back(static_cast<int>(p));
  }
  action_.resize(base_->arrow_count());
  for (std::size_t f = 0; f < base_->arrow_count(); ++f) {
    const auto& fib = fibers_[base_->dom(static_cast<int>(f))];
    action_[f].reserve(fib.size());
    for (int p : fib) {
      const int q = act(static_cast<int>(f), p);
      if (q < 0 || q >= static_cast<int>(proj_.size()))
        throw PreconditionError("action leaves the total space");
      action_[f].push_back(q);
    }
  }
}

std::optional<int> EquivariantSheaf::find(int x, const std::vector<int>& label) const {
  for (int p : fibers_[x])
    if (labels_[p] == label) return p;
  return std::nullopt;
}

int EquivariantSheaf::act(int f, int p) const {
  if (base_->dom(f) != proj_[p]) throw PreconditionError("arrow does not act on this fiber");
  return action_[f][fiber_pos_[p]];
}

// ---------------------------------------------------------------- checks

bool is_local_homeomorphism(const EquivariantSheaf& s) {
  const FinSpace& X = s.total();
  const FinSpace& B = s.base().objects();
  if (!is_continuous(X, B, s.projection())) return false;
  for (std::size_t p = 0; p < s.size(); ++p) {
    const PointSet& n = X.neighborhood(p);
    PointSet img = B.empty();
    for (auto q = n.find_first(); q != PointSet::npos; q = n.find_next(q)) {
      const int x = s.proj(static_cast<int>(q));
      if (img.test(x)) return false;  // not injective on N(p)
      img.set(x);
    }
    if (!B.is_open(img)) return false;
  }
  return true;
}

bool action_continuous(const EquivariantSheaf& s) {
  const TopGroupoid& G = s.base();
  const FinSpace& A = G.arrows();
  const FinSpace& X = s.total();
  for (int f = 0; f < static_cast<int>(G.arrow_count()); ++f)
    for (int p : s.fiber(G.dom(f))) {
      const PointSet& target = X.neighborhood(s.act(f, p));
      const PointSet& nf = A.neighborhood(f);
      const PointSet& np = X.neighborhood(p);
      for (auto f2 = nf.find_first(); f2 != PointSet::npos; f2 = nf.find_next(f2))
        for (auto p2 = np.find_first(); p2 != PointSet::npos; p2 = np.find_next(p2)) {
          if (G.dom(static_cast<int>(f2)) != s.proj(static_cast<int>(p2))) continue;
          if (!target.test(s.act(static_cast<int>(f2), static_cast<int>(p2)))) return false;
        }
    }
  return true;
}

std::vector<std::string> check_sheaf(const EquivariantSheaf& s) {
  std::vector<std::string> errs;
  const TopGroupoid& G = s.base();
  if (!is_local_homeomorphism(s)) errs.push_back("projection is not a local homeomorphism");
  for (std::size_t p = 0; p < s.size(); ++p)
    if (s.act(G.unit(s.proj(static_cast<int>(p))), static_cast<int>(p)) != static_cast<int>(p)) {
      errs.push_back("unit law fails at point " + std::to_string(p));
      break;
    }
  bool comp_ok = true, cod_ok = true;
  for (int f = 0; f < static_cast<int>(G.arrow_count()); ++f)
    for (int p : s.fiber(G.dom(f))) {
      const int q = s.act(f, p);
      if (s.proj(q) != G.cod(f)) cod_ok = false;
      for (int g : G.arrows_from(G.cod(f)))
        if (s.act(G.compose(g, f), p) != s.act(g, q)) comp_ok = false;
    }
  if (!cod_ok) errs.push_back("action does not land over the codomain");
  if (!comp_ok) errs.push_back("composition law fails");
  if (!action_continuous(s)) errs.push_back("action is not continuous");
  return errs;
}

SheafMorphismReport check_sheaf_morphism(const EquivariantSheaf& from,
                                         const EquivariantSheaf& to,
                                         const std::vector<int>& map) {
  SheafMorphismReport r;
  if (map.size() != from.size()) throw PreconditionError("morphism table of wrong size");
  const TopGroupoid& G = from.base();
  for (std::size_t p = 0; p < from.size(); ++p)
    if (map[p] < 0 || to.proj(map[p]) != from.proj(static_cast<int>(p))) r.over_base = false;
  if (!r.over_base) {
    r.equivariant = r.continuous = r.injective = r.surjective = r.inverse_continuous = false;
    return r;
  }
  for (int f = 0; f < static_cast<int>(G.arrow_count()) && r.equivariant; ++f)
    for (int p : from.fiber(G.dom(f)))
      if (map[from.act(f, p)] != to.act(f, map[p])) {
        r.equivariant = false;
        break;
      }
  r.continuous = is_continuous(from.total(), to.total(), map);
  std::vector<int> inverse(to.size(), -1);
  for (std::size_t p = 0; p < from.size(); ++p) {
    if (inverse[map[p]] != -1) r.injective = false;
    inverse[map[p]] = static_cast<int>(p);
  }
  for (int q : inverse)
    if (q == -1) r.surjective = false;
  r.inverse_continuous =
      r.injective && r.surjective && is_continuous(to.total(), from.total(), inverse);
  return r;
}

// ---------------------------------------------------------------- stability

PointSet stabilize(const EquivariantSheaf& s, const PointSet& subset) {
  // In a groupoid the orbit of a point is reached in one step.
  PointSet out = subset;
  for (auto p = subset.find_first(); p != PointSet::npos; p = subset.find_next(p))
    for (int f : s.base().arrows_from(s.proj(static_cast<int>(p))))
      out.set(s.act(f, static_cast<int>(p)));
  return out;
}

bool is_stable(const EquivariantSheaf& s, const PointSet& subset) {
  return stabilize(s, subset) == subset;
}

PointSet minimal_stable_open(const EquivariantSheaf& s, int point) {
  PointSet cur(s.size());
  cur.set(point);
  while (true) {
    PointSet next = stabilize(s, s.total().hull(cur));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::vector<PointSet> stable_open_sets(const EquivariantSheaf& s, std::size_t limit) {
  std::set<PointSet> gens;
  for (std::size_t p = 0; p < s.size(); ++p) gens.insert(minimal_stable_open(s, static_cast<int>(p)));
  std::set<PointSet> found{PointSet(s.size())};
  for (const auto& g : gens) {
    std::vector<PointSet> added;
    for (const auto& o : found) {
      PointSet u = o | g;
      if (!found.count(u)) added.push_back(std::move(u));
    }
    for (auto& u : added) found.insert(std::move(u));
    if (found.size() > limit)
      throw LimitExceeded("stable open lattice exceeds limit", static_cast<double>(found.size()));
  }
  return {found.begin(), found.end()};
}

// ---------------------------------------------------------------- definables

namespace {

std::string params_name(const std::vector<int>& a) {
  std::string out = "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(a[i]);
  }
  return out + ")";
}

}  // namespace

DefinableSheaf definable_sheaf(const ModelGroupoid& mg, const FormulaInContext& f) {
  const ModelClass& mc = *mg.models;
  check_well_formed(mc.signature(), f);
  const int k = f.arity();
  std::vector<int> proj;
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<int>> index(mc.model_count());
  for (int m = 0; m < mc.model_count(); ++m) {
    const int b = mc.model(m).block_count();
    auto bits = extension_bits(mc.model(m), f);
    index[m].assign(bits.size(), -1);
    for (std::size_t r = 0; r < bits.size(); ++r)
      if (bits[r]) {
        index[m][r] = static_cast<int>(proj.size());
        proj.push_back(m);
        labels.push_back(tuple_unrank(r, b, k));
      }
  }
  const std::size_t n = proj.size();
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  const FinSpace& base = mg.groupoid->objects();
  for (std::size_t i = 0; i < base.subbasis().size(); ++i) {
    names.push_back("pi" + base.subbasis_names()[i]);
    sets.push_back(preimage(proj, base.subbasis()[i]));
  }
  const int S = mc.index_set().size();
  for (std::size_t r = 0; r < tuple_count(S, k); ++r) {
    auto a = tuple_unrank(r, S, k);
    PointSet img(n);
    for (int m = 0; m < mc.model_count(); ++m) {
      const auto& M = mc.model(m);
      BlockTuple t;
      bool ok = true;
      for (int e : a) {
        ok = ok && M.defined(e);
        t.push_back(M.block_of(e));
      }
      if (!ok) continue;
      const int p = index[m][tuple_rank(t, M.block_count())];
      if (p >= 0) img.set(p);
    }
    names.push_back("s" + params_name(a));
    sets.push_back(std::move(img));
  }
  const ModelClass* raw = &mc;
  auto act = [raw, &index, &proj, &labels](int arrow, int p) {
    const StructIso& iso = raw->iso(arrow);
    BlockTuple t = labels[p];
    for (auto& v : t) v = iso.map[v];
    (void)proj;
    return index[iso.cod][tuple_rank(t, raw->model(iso.cod).block_count())];
  };
  EquivariantSheaf sheaf(mg.groupoid, FinSpace(n, std::move(names), std::move(sets)), proj,
                         labels, act);
  return {std::move(sheaf), f, mg.models};
}

PointSet definable_basic_open(const DefinableSheaf& d, const FormulaInContext& psi,
                              const std::vector<int>& b) {
  const int k = d.formula.arity();
  if (psi.arity() != k + static_cast<int>(b.size()))
    throw PreconditionError("basic open formula has the wrong context length");
  const ModelClass& mc = *d.models;
  PointSet out(d.sheaf.size());
  for (std::size_t p = 0; p < d.sheaf.size(); ++p) {
    const auto& M = mc.model(d.sheaf.proj(static_cast<int>(p)));
    BlockTuple t = d.sheaf.label(static_cast<int>(p));
    bool ok = true;
    for (int e : b) {
      ok = ok && M.defined(e);
      t.push_back(M.block_of(e));
    }
    if (ok && satisfies(M, psi, t)) out.set(p);
  }
  return out;
}

PointSet section_image(const DefinableSheaf& d, const std::vector<int>& a) {
  const ModelClass& mc = *d.models;
  PointSet out(d.sheaf.size());
  for (std::size_t p = 0; p < d.sheaf.size(); ++p) {
    const auto& M = mc.model(d.sheaf.proj(static_cast<int>(p)));
    BlockTuple t;
    bool ok = true;
    for (int e : a) {
      ok = ok && M.defined(e);
      t.push_back(M.block_of(e));
    }
    if (ok && t == d.sheaf.label(static_cast<int>(p))) out.set(p);
  }
  return out;
}

// ---------------------------------------------------------------- pullback, powers

EquivariantSheaf pullback_sheaf(const GroupoidMorphism& m, const EquivariantSheaf& s) {
  const TopGroupoid& H = *m.source;
  if (m.target->object_count() != s.base().object_count() ||
      m.target->arrow_count() != s.base().arrow_count())
    throw PreconditionError("sheaf does not live over the morphism's target");
  std::vector<int> proj, second;
  std::vector<std::vector<int>> labels;
  std::vector<std::map<int, int>> index(H.object_count());
  for (int x = 0; x < static_cast<int>(H.object_count()); ++x)
    for (int p : s.fiber(m.on_objects[x])) {
      index[x][p] = static_cast<int>(proj.size());
      proj.push_back(x);
      second.push_back(p);
      labels.push_back(s.label(p));
    }
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  for (std::size_t i = 0; i < H.objects().subbasis().size(); ++i) {
    names.push_back("pi" + H.objects().subbasis_names()[i]);
    sets.push_back(preimage(proj, H.objects().subbasis()[i]));
  }
  for (std::size_t i = 0; i < s.total().subbasis().size(); ++i) {
    names.push_back("q" + s.total().subbasis_names()[i]);
    sets.push_back(preimage(second, s.total().subbasis()[i]));
  }
  const std::size_t n = proj.size();
  auto act = [&](int h, int p) {
    return index[H.cod(h)].at(s.act(m.on_arrows[h], second[p]));
  };
  return EquivariantSheaf(m.source, FinSpace(n, std::move(names), std::move(sets)), proj,
                          labels, act);
}

EquivariantSheaf terminal_sheaf(GroupoidPtr base) {
  const TopGroupoid& G = *base;
  std::vector<int> proj(G.object_count());
  for (std::size_t x = 0; x < proj.size(); ++x) proj[x] = static_cast<int>(x);
  std::vector<std::vector<int>> labels(proj.size());
  FinSpace total(proj.size(), G.objects().subbasis_names(), G.objects().subbasis());
  const TopGroupoid* raw = base.get();
  return EquivariantSheaf(std::move(base), std::move(total), proj, labels,
                          [raw](int f, int) { return raw->cod(f); });
}

EquivariantSheaf fiber_power(const EquivariantSheaf& s, int k) {
  if (k < 0) throw PreconditionError("negative power");
  if (k == 0) return terminal_sheaf(s.base_ptr());
  const TopGroupoid& G = s.base();
  const int no = static_cast<int>(G.object_count());
  std::vector<int> proj;
  std::vector<std::vector<int>> labels, coords;
  std::vector<std::size_t> offset(no + 1, 0);
  for (int x = 0; x < no; ++x) {
    const auto& fib = s.fiber(x);
    const int w = static_cast<int>(fib.size());
    const std::size_t count = tuple_count(w, k);
    for (std::size_t r = 0; r < count; ++r) {
      auto pos = tuple_unrank(r, w, k);
      std::vector<int> pts, label;
      for (int i : pos) {
        pts.push_back(fib[i]);
        const auto& l = s.label(fib[i]);
        label.insert(label.end(), l.begin(), l.end());
      }
      proj.push_back(x);
      coords.push_back(std::move(pts));
      labels.push_back(std::move(label));
    }
    offset[x + 1] = proj.size();
  }
  const std::size_t n = proj.size();
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  for (std::size_t i = 0; i < G.objects().subbasis().size(); ++i) {
    names.push_back("pi" + G.objects().subbasis_names()[i]);
    sets.push_back(preimage(proj, G.objects().subbasis()[i]));
  }
  for (int c = 0; c < k; ++c)
    for (std::size_t i = 0; i < s.total().subbasis().size(); ++i) {
      PointSet set(n);
      for (std::size_t p = 0; p < n; ++p)
        if (s.total().subbasis()[i].test(coords[p][c])) set.set(p);
      names.push_back("q" + std::to_string(c) + s.total().subbasis_names()[i]);
      sets.push_back(std::move(set));
    }
  // Position of each point of s within its fiber.
  std::vector<int> pos_in_fiber(s.size());
  for (int x = 0; x < no; ++x)
    for (std::size_t i = 0; i < s.fiber(x).size(); ++i)
      pos_in_fiber[s.fiber(x)[i]] = static_cast<int>(i);
  auto act = [&](int f, int p) {
    const int y = G.cod(f);
    const int w = static_cast<int>(s.fiber(y).size());
    std::size_t r = 0;
    for (int q : coords[p]) r = r * w + pos_in_fiber[s.act(f, q)];
    return static_cast<int>(offset[y] + r);
  };
  return EquivariantSheaf(s.base_ptr(), FinSpace(n, std::move(names), std::move(sets)), proj,
                          labels, act);
}

}  // namespace geodual
