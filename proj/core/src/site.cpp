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

#include "geodual/site.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "geodual/error.hpp"

namespace geodual {

namespace {

PointSet image_of(const std::vector<int>& f, const PointSet& s, std::size_t n) {
  return image(f, s, n);
}

bool composition_closed(const TopGroupoid& g, const PointSet& N) {
  for (auto f = N.find_first(); f != PointSet::npos; f = N.find_next(f))
    for (int h : g.arrows_from(g.cod(static_cast<int>(f))))
      if (N.test(h) && !N.test(g.compose(h, static_cast<int>(f)))) return false;
  return true;
}

bool inverse_closed(const TopGroupoid& g, const PointSet& N) {
  for (auto f = N.find_first(); f != PointSet::npos; f = N.find_next(f))
    if (!N.test(g.inverse(static_cast<int>(f)))) return false;
  return true;
}

// Least open, inverse- and composition-closed set containing the given one.
PointSet subgroupoid_closure(const TopGroupoid& g, PointSet cur) {
  while (true) {
    PointSet next = g.arrows().hull(cur);
    for (auto f = cur.find_first(); f != PointSet::npos; f = cur.find_next(f))
      next.set(g.inverse(static_cast<int>(f)));
    const PointSet snap = next;
    for (auto f = snap.find_first(); f != PointSet::npos; f = snap.find_next(f))
      for (int h : g.arrows_from(g.cod(static_cast<int>(f))))
        if (snap.test(h)) next.set(g.compose(h, static_cast<int>(f)));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::vector<int> block_reps(const IndexedStructure& M, const std::vector<int>& blocks) {
  std::vector<int> out;
  out.reserve(blocks.size());
  for (int b : blocks) out.push_back(M.block_key(b));
  return out;
}

bool distinct(const std::vector<int>& a) {
  std::set<int> s(a.begin(), a.end());
  return s.size() == a.size();
}

}  // namespace

std::vector<std::string> check_site_data(const TopGroupoid& g, const PointSet& N) {
  std::vector<std::string> errs;
  if (N.size() != g.arrow_count()) {
    errs.push_back("arrow set has the wrong size");
    return errs;
  }
  if (!g.arrows().is_open(N)) errs.push_back("arrow set is not open");
  if (!inverse_closed(g, N)) errs.push_back("arrow set is not closed under inverses");
  if (!composition_closed(g, N)) errs.push_back("arrow set is not closed under composition");
  return errs;
}

MoerdijkSite moerdijk_sheaf(GroupoidPtr gp, const PointSet& N) {
  const TopGroupoid& g = *gp;
  auto errs = check_site_data(g, N);
  if (!errs.empty()) throw PreconditionError(errs.front());
  MoerdijkSite site;
  site.base = gp;
  site.N = N;
  site.U = image_of(g.dom_map(), N, g.object_count());
  const PointSet D = preimage(g.dom_map(), site.U);

  // f ~ h iff c f == c h and h^{-1} f in N; arrows are scanned in order, so
  // each class is keyed by its least member.
  site.class_of_arrow.assign(g.arrow_count(), -1);
  for (auto f = D.find_first(); f != PointSet::npos; f = D.find_next(f)) {
    if (site.class_of_arrow[f] != -1) continue;
    const int cls = static_cast<int>(site.representative.size());
    site.representative.push_back(static_cast<int>(f));
    site.class_of_arrow[f] = cls;
    const int fi = g.inverse(static_cast<int>(f));
    for (auto h = D.find_next(f); h != PointSet::npos; h = D.find_next(h)) {
      if (site.class_of_arrow[h] != -1 || g.cod(static_cast<int>(h)) != g.cod(static_cast<int>(f)))
        continue;
      // f^{-1} h in N is the same condition as h^{-1} f in N.
      if (N.test(g.compose(fi, static_cast<int>(h)))) site.class_of_arrow[h] = cls;
    }
  }
  const std::size_t n = site.representative.size();
  std::vector<int> q = site.class_of_arrow;
  std::vector<int> proj(n);
  std::vector<std::vector<int>> labels(n);
  for (std::size_t c = 0; c < n; ++c) {
    proj[c] = g.cod(site.representative[c]);
    labels[c] = {site.representative[c]};
  }
  // Quotient topology: a set of classes is open iff its preimage is open.
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  for (std::size_t c = 0; c < n; ++c) {
    PointSet cur(n);
    cur.set(c);
    while (true) {
      PointSet arrows(g.arrow_count());
      for (std::size_t f = 0; f < q.size(); ++f)
        if (q[f] >= 0 && cur.test(q[f])) arrows.set(f);
      arrows = g.arrows().hull(arrows);
      PointSet next = cur;
      for (auto f = arrows.find_first(); f != PointSet::npos; f = arrows.find_next(f))
        if (q[f] >= 0) next.set(q[f]);
      if (next == cur) break;
      cur = std::move(next);
    }
    names.push_back("n[" + std::to_string(site.representative[c]) + "]");
    sets.push_back(std::move(cur));
  }
  const auto& cls = site.class_of_arrow;
  const auto& rep = site.representative;
  auto act = [&g, &cls, &rep](int h, int c) { return cls[g.compose(h, rep[c])]; };
  site.sheaf = EquivariantSheaf(gp, FinSpace(n, std::move(names), std::move(sets)), proj,
                                labels, act);
  site.violations = check_sheaf(site.sheaf);
  return site;
}

std::vector<PointSet> site_stable_opens(const MoerdijkSite& site, std::size_t limit) {
  const TopGroupoid& g = *site.base;
  auto close = [&](PointSet cur) {
    while (true) {
      PointSet next = g.objects().hull(cur);
      for (auto f = site.N.find_first(); f != PointSet::npos; f = site.N.find_next(f))
        if (next.test(g.dom(static_cast<int>(f)))) next.set(g.cod(static_cast<int>(f)));
      if (next == cur) return cur;
      cur = std::move(next);
    }
  };
  std::set<PointSet> gens;
  for (auto x = site.U.find_first(); x != PointSet::npos; x = site.U.find_next(x)) {
    PointSet s(g.object_count());
    s.set(x);
    gens.insert(close(s));
  }
  std::set<PointSet> found{PointSet(g.object_count())};
  for (const auto& gen : gens) {
    std::vector<PointSet> added;
    for (const auto& o : found) {
      PointSet u = o | gen;
      if (!found.count(u)) added.push_back(std::move(u));
    }
    for (auto& u : added) found.insert(std::move(u));
    if (found.size() > limit)
      throw LimitExceeded("site stable open lattice exceeds limit", static_cast<double>(found.size()));
  }
  return {found.begin(), found.end()};
}

PointSet site_subsheaf(const MoerdijkSite& site, const PointSet& V) {
  PointSet out(site.representative.size());
  for (std::size_t f = 0; f < site.class_of_arrow.size(); ++f) {
    const int c = site.class_of_arrow[f];
    if (c >= 0 && V.test(site.base->dom(static_cast<int>(f)))) out.set(c);
  }
  return out;
}

std::vector<std::string> check_subobject_correspondence(const MoerdijkSite& site) {
  std::vector<std::string> errs;
  const auto opens = site_stable_opens(site);
  const auto subs = stable_open_sets(site.sheaf);
  std::vector<PointSet> images;
  for (const auto& V : opens) images.push_back(site_subsheaf(site, V));
  std::set<PointSet> distinct_images(images.begin(), images.end());
  if (distinct_images.size() != images.size()) errs.push_back("correspondence is not injective");
  if (distinct_images != std::set<PointSet>(subs.begin(), subs.end()))
    errs.push_back("correspondence misses stable open subsheaves");
  for (std::size_t i = 0; i < opens.size(); ++i)
    for (std::size_t j = 0; j < opens.size(); ++j)
      if (subset_of(opens[i], opens[j]) != subset_of(images[i], images[j])) {
        errs.push_back("correspondence does not preserve and reflect order");
        return errs;
      }
  return errs;
}

LiftedSection lift_section(const EquivariantSheaf& s, const PointSet& U,
                           const std::vector<int>& section) {
  const TopGroupoid& g = s.base();
  if (!g.objects().is_open(U)) throw PreconditionError("section domain is not open");
  if (section.size() != g.object_count()) throw PreconditionError("section of wrong size");
  for (std::size_t x = 0; x < section.size(); ++x) {
    if (!U.test(x)) continue;
    if (section[x] < 0 || s.proj(section[x]) != static_cast<int>(x))
      throw PreconditionError("map is not a section over its domain");
  }
  for (const auto& W : s.total().subbasis()) {
    PointSet pre(g.object_count());
    for (auto x = U.find_first(); x != PointSet::npos; x = U.find_next(x))
      if (W.test(section[x])) pre.set(x);
    if (!g.objects().is_open(pre)) throw PreconditionError("section is not continuous");
  }
  PointSet N(g.arrow_count());
  for (int f = 0; f < static_cast<int>(g.arrow_count()); ++f) {
    const int x = g.dom(f), y = g.cod(f);
    if (U.test(x) && U.test(y) && s.act(f, section[x]) == section[y]) N.set(f);
  }
  LiftedSection out;
  out.site = moerdijk_sheaf(s.base_ptr(), N);
  const auto& site = out.site;
  out.map.resize(site.representative.size());
  for (std::size_t c = 0; c < out.map.size(); ++c) {
    const int f = site.representative[c];
    out.map[c] = s.act(f, section[g.dom(f)]);
  }
  for (std::size_t f = 0; f < site.class_of_arrow.size(); ++f) {
    const int c = site.class_of_arrow[f];
    if (c >= 0 && s.act(static_cast<int>(f), section[g.dom(static_cast<int>(f))]) != out.map[c])
      out.well_defined = false;
  }
  for (auto x = U.find_first(); x != PointSet::npos; x = U.find_next(x))
    if (out.map[site.class_of_arrow[g.unit(static_cast<int>(x))]] != section[x]) out.factors = false;
  out.report = check_sheaf_morphism(site.sheaf, s, out.map);
  return out;
}

std::vector<int> parameter_section(const DefinableSheaf& d, const std::vector<int>& a) {
  const PointSet img = section_image(d, a);
  std::vector<int> out(d.sheaf.base().object_count(), -1);
  for (auto p = img.find_first(); p != PointSet::npos; p = img.find_next(p))
    out[d.sheaf.proj(static_cast<int>(p))] = static_cast<int>(p);
  return out;
}

bool point_reachable(const DefinableSheaf& d, int point, const std::vector<int>& a) {
  const auto& M = d.models->model(d.sheaf.proj(point));
  const std::vector<int> reps = block_reps(M, d.sheaf.label(point));
  // Repeated parameters need equal blocks; the rest goes to the star lemma.
  std::map<int, int> block_at;
  std::vector<int> from, to;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int blk = d.sheaf.label(point)[i];
    auto [it, fresh] = block_at.emplace(a[i], blk);
    if (!fresh) {
      if (it->second != blk) return false;
      continue;
    }
    from.push_back(reps[i]);
    to.push_back(a[i]);
  }
  return star_headroom(M, from, to);
}

std::vector<int> mentioned_elements(const BasicOpenI& v) {
  std::set<int> e(v.dom.params.begin(), v.dom.params.end());
  e.insert(v.cod.params.begin(), v.cod.params.end());
  for (auto [b, c] : v.preserve) {
    e.insert(b);
    e.insert(c);
  }
  return {e.begin(), e.end()};
}

bool is_symmetric(const BasicOpenI& v) {
  if (!(v.dom == v.cod) || !distinct(v.dom.params)) return false;
  if (v.preserve.size() != v.dom.params.size()) return false;
  for (std::size_t i = 0; i < v.preserve.size(); ++i)
    if (v.preserve[i] != std::make_pair(v.dom.params[i], v.dom.params[i])) return false;
  return true;
}

BasicOpenI rewrite_symmetric(const ModelClass& mc, const BasicOpenI& v, int model) {
  const int unit = mc.identity(model);
  if (!basic_open_arrows(mc, v).test(unit))
    throw PreconditionError("identity of the model is not in the basic open");
  if (is_symmetric(v)) return v;

  const std::vector<int> e = mentioned_elements(v);
  auto pos = [&e](int a) {
    return static_cast<VarId>(std::lower_bound(e.begin(), e.end(), a) - e.begin());
  };
  auto vars_of = [&](const std::vector<int>& params) {
    std::vector<VarId> out;
    for (int a : params) out.push_back(pos(a));
    return out;
  };
  std::vector<Formula> parts;
  parts.push_back(instantiate(v.dom.formula, vars_of(v.dom.params)));
  parts.push_back(instantiate(v.cod.formula, vars_of(v.cod.params)));
  for (auto [b, c] : v.preserve)
    if (b != c) parts.push_back(Formula::eq(Term::variable(pos(b)), Term::variable(pos(c))));
  std::vector<VarId> ctx;
  for (std::size_t i = 0; i < e.size(); ++i) ctx.push_back(static_cast<VarId>(i));
  const FormulaInContext chi = canonical_form(FormulaInContext{ctx, Formula::conj(std::move(parts))});

  BasicOpenI out;
  out.dom = BasicOpenM{chi, e};
  out.cod = out.dom;
  for (int a : e) out.preserve.emplace_back(a, a);

  const PointSet rewritten = basic_open_arrows(mc, out);
  if (!rewritten.test(unit) || !subset_of(rewritten, basic_open_arrows(mc, v)))
    throw Error("symmetric rewrite left the original neighbourhood");
  return out;
}

FormulaInContext positive_diagram(const IndexedStructure& M, const Signature& sig,
                                  const std::vector<int>& p) {
  const int k = static_cast<int>(p.size());
  std::vector<int> blocks;
  for (int e : p) {
    if (!M.defined(e)) throw PreconditionError("diagram over an undefined element");
    blocks.push_back(M.block_of(e));
  }
  std::vector<Formula> atoms;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (blocks[i] == blocks[j]) atoms.push_back(Formula::eq(Term::variable(i), Term::variable(j)));
  for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r) {
    const int n = sig.relations()[r].arity;
    for (std::size_t t = 0; t < tuple_count(k, n); ++t) {
      auto idx = tuple_unrank(t, k, n);
      std::vector<int> args;
      std::vector<Term> terms;
      for (int i : idx) {
        args.push_back(blocks[i]);
        terms.push_back(Term::variable(i));
      }
      if (M.holds(r, args)) atoms.push_back(Formula::relation(r, std::move(terms)));
    }
  }
  for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f) {
    const int n = sig.functions()[f].arity;
    for (std::size_t t = 0; t < tuple_count(k, n); ++t) {
      auto idx = tuple_unrank(t, k, n);
      std::vector<int> args;
      std::vector<Term> terms;
      for (int i : idx) {
        args.push_back(blocks[i]);
        terms.push_back(Term::variable(i));
      }
      const int value = M.apply(f, args);
      for (int j = 0; j < k; ++j)
        if (blocks[j] == value)
          atoms.push_back(Formula::eq(Term::apply(f, terms), Term::variable(j)));
    }
  }
  std::vector<VarId> ctx;
  for (int i = 0; i < k; ++i) ctx.push_back(i);
  return canonical_form(FormulaInContext{ctx, Formula::conj(std::move(atoms))});
}

DensityCertificate density_certificate(const ModelGroupoid& mg, const MoerdijkSite& site,
                                       int element) {
  const ModelClass& mc = *mg.models;
  const TopGroupoid& g = *mg.groupoid;
  DensityCertificate cert;
  cert.element = element;
  const int f = site.representative.at(element);
  const int M = g.dom(f);
  const auto domain = mc.model(M).domain();

  // Smallest parameter set whose diagram neighbourhood of 1_M sits in N.
  std::optional<BasicOpenI> found;
  for (int size = 0; size <= static_cast<int>(domain.size()) && !found; ++size) {
    std::vector<bool> pick(domain.size(), false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      std::vector<int> P;
      for (std::size_t i = 0; i < domain.size(); ++i)
        if (pick[i]) P.push_back(domain[i]);
      BasicOpenI v;
      v.dom = BasicOpenM{positive_diagram(mc.model(M), mc.signature(), P), P};
      v.cod = v.dom;
      for (int a : P) v.preserve.emplace_back(a, a);
      if (subset_of(basic_open_arrows(mc, v), site.N)) {
        found = v;
        break;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  if (!found) {
    cert.outcome = Outcome::Fail;
    cert.diagnosis = "no diagram neighbourhood of the identity inside N";
    return cert;
  }
  cert.neighborhood = rewrite_symmetric(mc, *found, M);
  cert.params = cert.neighborhood.dom.params;
  if (!subset_of(basic_open_arrows(mc, cert.neighborhood), site.N)) {
    cert.outcome = Outcome::Fail;
    cert.diagnosis = "symmetric neighbourhood leaves N";
    return cert;
  }

  const DefinableSheaf D = definable_sheaf(mg, cert.neighborhood.dom.formula);
  const PointSet V = basic_open_points(mc, cert.neighborhood.dom);
  const LiftedSection lift = lift_section(D.sheaf, V, parameter_section(D, cert.params));
  cert.lifted_map = lift.map;

  // e-hat: [g]_M -> [g]_N.
  cert.to_site.resize(lift.site.representative.size());
  for (std::size_t c = 0; c < cert.to_site.size(); ++c)
    cert.to_site[c] = site.class_of_arrow[lift.site.representative[c]];
  const auto ehat = check_sheaf_morphism(lift.site.sheaf, site.sheaf, cert.to_site);
  const int source_class = lift.site.class_of_arrow[f];
  cert.preimage = lift.map[source_class];

  std::vector<bool> hit(D.sheaf.size(), false);
  for (int p : lift.map) hit[p] = true;
  int unexplained = 0;
  for (std::size_t p = 0; p < hit.size(); ++p)
    if (!hit[p]) {
      ++cert.unreached;
      if (point_reachable(D, static_cast<int>(p), cert.params)) ++unexplained;
    }

  if (!lift.well_defined || !lift.factors || !lift.report.is_morphism() || !ehat.is_morphism() ||
      cert.to_site[source_class] != element || !lift.report.injective ||
      (!lift.report.inverse_continuous && lift.report.surjective) || unexplained > 0) {
    cert.outcome = Outcome::Fail;
    cert.diagnosis = "lifted section or comparison map is not as constructed";
  } else if (cert.unreached > 0) {
    cert.outcome = Outcome::Gated;
    cert.diagnosis = std::to_string(cert.unreached) +
                     " points of the definable sheaf lack star headroom";
  }
  return cert;
}

std::vector<PointSet> open_subgroupoids(const TopGroupoid& g, std::size_t limit) {
  const std::size_t n = g.arrow_count();
  std::set<PointSet> gens;
  for (std::size_t f = 0; f < n; ++f) {
    PointSet s(n);
    s.set(f);
    gens.insert(subgroupoid_closure(g, s));
  }
  std::set<PointSet> found(gens.begin(), gens.end());
  std::deque<PointSet> queue(gens.begin(), gens.end());
  while (!queue.empty()) {
    const PointSet cur = queue.front();
    queue.pop_front();
    for (const auto& gen : gens) {
      if (subset_of(gen, cur)) continue;
      PointSet next = subgroupoid_closure(g, cur | gen);
      if (found.insert(next).second) {
        if (found.size() > limit)
          throw LimitExceeded("open subgroupoid count exceeds limit", static_cast<double>(found.size()));
        queue.push_back(std::move(next));
      }
    }
  }
  return {found.begin(), found.end()};
}

StabilizationReport check_basic_stabilization(const DefinableSheaf& d,
                                              const FormulaInContext& psi,
                                              const std::vector<int>& a) {
  if (!distinct(a)) throw PreconditionError("stabilization parameters must be distinct");
  const int k = d.formula.arity();
  const int m = static_cast<int>(a.size());
  if (psi.arity() != k + m) throw PreconditionError("basic open formula has the wrong context length");
  const ModelClass& mc = *d.models;
  StabilizationReport r;
  r.stabilized = stabilize(d.sheaf, definable_basic_open(d, psi, a));
  r.expected = PointSet(d.sheaf.size());
  for (std::size_t p = 0; p < d.sheaf.size(); ++p) {
    const auto& M = mc.model(d.sheaf.proj(static_cast<int>(p)));
    const auto& b = d.sheaf.label(static_cast<int>(p));
    // Witnesses c with psi(b, c); a missing point is gated when none of
    // them admits the star construction.
    bool any = false, reachable = false;
    const int blocks = M.block_count();
    for (std::size_t t = 0; t < tuple_count(blocks, m); ++t) {
      BlockTuple full = b;
      auto c = tuple_unrank(t, blocks, m);
      full.insert(full.end(), c.begin(), c.end());
      if (!satisfies(M, psi, full)) continue;
      any = true;
      if (star_headroom(M, block_reps(M, c), a)) reachable = true;
    }
    if (!any) continue;
    r.expected.set(p);
    if (!r.stabilized.test(p)) {
      ++r.missing;
      if (!reachable) ++r.gated;
    }
  }
  r.extra = static_cast<int>((r.stabilized - r.expected).count());
  if (r.extra > 0 || r.missing > r.gated)
    r.outcome = Outcome::Fail;
  else if (r.gated > 0)
    r.outcome = Outcome::Gated;
  return r;
}

}  // namespace geodual
