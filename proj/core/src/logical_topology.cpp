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

#include "geodual/logical_topology.hpp"

#include "geodual/error.hpp"

namespace geodual {

namespace {

void check_params(const ModelClass& mc, const BasicOpenM& b) {
  if (static_cast<int>(b.params.size()) != b.formula.arity())
    throw PreconditionError("parameter tuple length differs from context length");
  for (int a : b.params)
    if (!mc.index_set().contains(a))
      throw PreconditionError("parameter outside the index set");
}

std::string tuple_string(const std::vector<int>& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(t[i]);
  }
  return out;
}

}  // namespace

bool model_in(const ModelClass& mc, int model, const BasicOpenM& b) {
  const auto& M = mc.model(model);
  BlockTuple t;
  for (int a : b.params) {
    if (!M.defined(a)) return false;
    t.push_back(M.block_of(a));
  }
  return satisfies(M, b.formula, t);
}

PointSet basic_open_points(const ModelClass& mc, const BasicOpenM& b) {
  check_params(mc, b);
  check_well_formed(mc.signature(), b.formula);
  PointSet out(mc.model_count());
  for (int m = 0; m < mc.model_count(); ++m)
    if (model_in(mc, m, b)) out.set(m);
  return out;
}

PointSet maps_to(const ModelClass& mc, int a, int b) {
  PointSet out(mc.iso_count());
  for (int i = 0; i < mc.iso_count(); ++i) {
    const auto& f = mc.iso(i);
    const auto& D = mc.model(f.dom);
    const auto& C = mc.model(f.cod);
    if (D.defined(a) && C.defined(b) && f.map[D.block_of(a)] == C.block_of(b))
      out.set(i);
  }
  return out;
}

PointSet basic_open_arrows(const ModelClass& mc, const BasicOpenI& v) {
  for (auto [b, c] : v.preserve)
    if (!mc.index_set().contains(b) || !mc.index_set().contains(c))
      throw PreconditionError("preservation pair outside the index set");
  const PointSet dom = basic_open_points(mc, v.dom);
  const PointSet cod = basic_open_points(mc, v.cod);
  PointSet out(mc.iso_count());
  for (int i = 0; i < mc.iso_count(); ++i) {
    const auto& f = mc.iso(i);
    if (!dom.test(f.dom) || !cod.test(f.cod)) continue;
    const auto& D = mc.model(f.dom);
    const auto& C = mc.model(f.cod);
    bool ok = true;
    for (auto [b, c] : v.preserve)
      ok = ok && D.defined(b) && C.defined(c) && f.map[D.block_of(b)] == C.block_of(c);
    if (ok) out.set(i);
  }
  return out;
}

namespace {

struct Subbasic {
  std::string name;
  PointSet set;
};

std::vector<Subbasic> model_subbasis(const ModelClass& mc) {
  const int n = mc.index_set().size();
  const int count = mc.model_count();
  const Signature& sig = mc.signature();
  std::vector<Subbasic> out;
  for (int a = 0; a < n; ++a) {
    PointSet s(count);
    for (int m = 0; m < count; ++m)
      if (mc.model(m).defined(a)) s.set(m);
    out.push_back({"<" + std::to_string(a) + ">", s});
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      PointSet s(count);
      for (int m = 0; m < count; ++m) {
        const auto& M = mc.model(m);
        if (M.defined(a) && M.defined(b) && M.block_of(a) == M.block_of(b)) s.set(m);
      }
      out.push_back({"<" + std::to_string(a) + "=" + std::to_string(b) + ">", s});
    }
  for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r) {
    const int ar = sig.relations()[r].arity;
    for (std::size_t k = 0; k < tuple_count(n, ar); ++k) {
      auto args = tuple_unrank(k, n, ar);
      PointSet s(count);
      for (int m = 0; m < count; ++m) {
        const auto& M = mc.model(m);
        BlockTuple t;
        bool ok = true;
        for (int a : args) {
          ok = ok && M.defined(a);
          t.push_back(M.block_of(a));
        }
        if (ok && M.holds(r, t)) s.set(m);
      }
      std::string name = "<" + sig.relations()[r].name;
      if (ar > 0) name += "(" + tuple_string(args) + ")";
      out.push_back({name + ">", s});
    }
  }
  for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f) {
    const int ar = sig.functions()[f].arity;
    for (std::size_t k = 0; k < tuple_count(n, ar); ++k) {
      auto args = tuple_unrank(k, n, ar);
      for (int b = 0; b < n; ++b) {
        PointSet s(count);
        for (int m = 0; m < count; ++m) {
          const auto& M = mc.model(m);
          BlockTuple t;
          bool ok = M.defined(b);
          for (int a : args) {
            ok = ok && M.defined(a);
            t.push_back(M.block_of(a));
          }
          if (ok && M.apply(f, t) == M.block_of(b)) s.set(m);
        }
        std::string name = "<" + sig.functions()[f].name;
        if (ar > 0) name += "(" + tuple_string(args) + ")";
        out.push_back({name + "=" + std::to_string(b) + ">", s});
      }
    }
  }
  return out;
}

}  // namespace

FinSpace model_space(const ModelClass& mc) {
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  for (auto& s : model_subbasis(mc)) {
    names.push_back(std::move(s.name));
    sets.push_back(std::move(s.set));
  }
  return FinSpace(mc.model_count(), std::move(names), std::move(sets));
}

FinSpace iso_space(const ModelClass& mc) {
  std::vector<int> d, c;
  for (const auto& f : mc.isos()) {
    d.push_back(f.dom);
    c.push_back(f.cod);
  }
  std::vector<std::string> names;
  std::vector<PointSet> sets;
  auto base = model_subbasis(mc);
  for (const auto& s : base) {
    names.push_back("d" + s.name);
    sets.push_back(preimage(d, s.set));
  }
  for (const auto& s : base) {
    names.push_back("c" + s.name);
    sets.push_back(preimage(c, s.set));
  }
  const int n = mc.index_set().size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      names.push_back("<" + std::to_string(a) + "|->" + std::to_string(b) + ">");
      sets.push_back(maps_to(mc, a, b));
    }
  return FinSpace(mc.iso_count(), std::move(names), std::move(sets));
}

IndexedStructure filter_to_model(const ModelClass& mc, const FinSpace& space,
                                 const CPFilter& F) {
  const int n = mc.index_set().size();
  const Signature& sig = mc.signature();
  auto in_filter = [&](const FormulaInContext& f, std::vector<int> params) {
    return F.contains(space, basic_open_points(mc, {f, std::move(params)}));
  };
  const FormulaInContext defined{{0}, Formula::top()};
  const FormulaInContext same{
      {0, 1}, Formula::eq(Term::variable(0), Term::variable(1))};

  std::vector<int> A;
  for (int a = 0; a < n; ++a)
    if (in_filter(defined, {a})) A.push_back(a);
  std::vector<int> block(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int a : A) {
    if (!in_filter(same, {a, a})) throw PreconditionError("filter: ~ not reflexive");
    if (block[a] != -1) continue;
    block[a] = static_cast<int>(blocks.size());
    blocks.push_back({a});
    for (int b : A)
      if (b != a && in_filter(same, {a, b})) {
        if (block[b] != -1) throw PreconditionError("filter: ~ not transitive");
        if (!in_filter(same, {b, a})) throw PreconditionError("filter: ~ not symmetric");
        block[b] = block[a];
        blocks.back().push_back(b);
      }
  }
  for (int a : A)
    for (int b : A)
      if ((block[a] == block[b]) != in_filter(same, {a, b}))
        throw PreconditionError("filter: ~ is not an equivalence relation");

  IndexedStructure M = IndexedStructure::from_partition(n, blocks, sig);
  const int nb = M.block_count();
  for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r) {
    const int ar = sig.relations()[r].arity;
    std::vector<Term> vars;
    for (int i = 0; i < ar; ++i) vars.push_back(Term::variable(i));
    FormulaInContext atom{std::vector<VarId>(), Formula::relation(r, vars)};
    for (int i = 0; i < ar; ++i) atom.context.push_back(i);
    std::vector<int> result(tuple_count(nb, ar), -1);
    for (std::size_t k = 0; k < tuple_count(static_cast<int>(A.size()), ar); ++k) {
      std::vector<int> args;
      BlockTuple t;
      for (int i : tuple_unrank(k, static_cast<int>(A.size()), ar)) {
        args.push_back(A[i]);
        t.push_back(M.block_of(A[i]));
      }
      const int value = in_filter(atom, args) ? 1 : 0;
      auto& slot = result[tuple_rank(t, nb)];
      if (slot != -1 && slot != value)
        throw PreconditionError("filter: relation not invariant under ~");
      slot = value;
    }
    for (std::size_t k = 0; k < result.size(); ++k)
      M.relation_table(r)[k] = static_cast<std::uint8_t>(result[k]);
  }
  for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f) {
    const int ar = sig.functions()[f].arity;
    std::vector<Term> vars;
    std::vector<VarId> ctx;
    for (int i = 0; i < ar; ++i) {
      vars.push_back(Term::variable(i));
      ctx.push_back(i);
    }
    ctx.push_back(ar);
    FormulaInContext graph{ctx, Formula::eq(Term::apply(f, vars), Term::variable(ar))};
    for (std::size_t k = 0; k < tuple_count(nb, ar); ++k) {
      std::vector<int> args;
      for (int blk : tuple_unrank(k, nb, ar)) args.push_back(M.block_key(blk));
      int value = -1;
      for (int b : A) {
        auto full = args;
        full.push_back(b);
        if (!in_filter(graph, full)) continue;
        if (value != -1 && value != M.block_of(b))
          throw PreconditionError("filter: function not single-valued");
        value = M.block_of(b);
      }
      if (value == -1) throw PreconditionError("filter: function not total");
      M.function_table(f)[k] = value;
    }
  }
  auto idx = mc.find_model(M);
  if (!idx) throw PreconditionError("filter does not determine a model of the class");
  if (!(neighborhood_filter(space, *idx) == F))
    throw PreconditionError("filter is not the neighbourhood filter of its model");
  return M;
}

std::string to_string(const Signature& sig, const BasicOpenM& b) {
  return "<" + to_string(sig, b.formula) + ", (" + tuple_string(b.params) + ")>";
}

std::string to_string(const Signature& sig, const BasicOpenI& v) {
  std::string pres;
  for (std::size_t i = 0; i < v.preserve.size(); ++i) {
    if (i) pres += ",";
    pres += std::to_string(v.preserve[i].first) + "|->" +
            std::to_string(v.preserve[i].second);
  }
  return "(" + to_string(sig, v.dom) + " / " + pres + " / " + to_string(sig, v.cod) + ")";
}

}  // namespace geodual
