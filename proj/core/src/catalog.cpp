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

#include "geodual/catalog.hpp"

#include <algorithm>

#include "geodual/error.hpp"

namespace geodual {

KeyLayout::KeyLayout(const ModelClass& mc, int arity) : mc_(&mc), arity_(arity) {
  offsets_.push_back(0);
  for (const auto& M : mc.models())
    offsets_.push_back(offsets_.back() + tuple_count(M.block_count(), arity));
  total_ = offsets_.back();
}

std::size_t KeyLayout::bit(int model, std::span<const int> tuple) const {
  return offsets_[model] + tuple_rank(tuple, mc_->model(model).block_count());
}

std::pair<int, BlockTuple> KeyLayout::locate(std::size_t bit) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), bit);
  const int m = static_cast<int>(it - offsets_.begin()) - 1;
  return {m, tuple_unrank(bit - offsets_[m], mc_->model(m).block_count(), arity_)};
}

Bits semantic_key(const ModelClass& mc, const KeyLayout& layout,
                  const FormulaInContext& f) {
  if (f.arity() != layout.arity())
    throw PreconditionError("formula arity differs from key layout");
  Bits key(layout.size());
  for (int m = 0; m < mc.model_count(); ++m) {
    auto bits = extension_bits(mc.model(m), f);
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) key.set(layout.offset(m) + i);
  }
  return key;
}

Bits project_last(const ModelClass& mc, const KeyLayout& from,
                  const KeyLayout& to, const Bits& key) {
  Bits out(to.size());
  for (int m = 0; m < mc.model_count(); ++m) {
    const std::size_t b = mc.model(m).block_count();
    const std::size_t n = to.count(m);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t y = 0; y < b; ++y)
        if (key.test(from.offset(m) + t * b + y)) {
          out.set(to.offset(m) + t);
          break;
        }
  }
  return out;
}

namespace {

std::vector<VarId> iota(int n) {
  std::vector<VarId> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

// All tuples of n variables of the given length.
std::vector<std::vector<Term>> var_tuples(int n, int arity) {
  std::vector<std::vector<Term>> out;
  const std::size_t count = tuple_count(n, arity);
  for (std::size_t r = 0; r < count; ++r) {
    std::vector<Term> t;
    for (int v : tuple_unrank(r, n, arity)) t.push_back(Term::variable(v));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

FormulaCatalog::FormulaCatalog(std::shared_ptr<const ModelClass> mc,
                               CatalogOptions options)
    : mc_(std::move(mc)), options_(options) {
  const int K = options_.max_context;
  const int D = options_.horn_only ? 0 : options_.depth;
  const int top_ctx = K + D;
  for (int n = 0; n <= top_ctx; ++n) layouts_.emplace_back(*mc_, n);
  classes_.resize(top_ctx + 1);
  index_.resize(top_ctx + 1);
  saturated_.assign(top_ctx + 1, false);

  const Signature& sig = mc_->signature();
  auto max_level = [&](int n) {
    return n <= K ? options_.depth : K + D - n;
  };

  // Level 0: atoms.
  for (int n = 0; n <= top_ctx; ++n) {
    std::vector<Formula> atoms;
    atoms.push_back(Formula::top());
    if (!options_.horn_only) atoms.push_back(Formula::bot());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        atoms.push_back(Formula::eq(Term::variable(i), Term::variable(j)));
    for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r)
      for (auto& args : var_tuples(n, sig.relations()[r].arity))
        atoms.push_back(Formula::relation(r, std::move(args)));
    for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f)
      for (auto& args : var_tuples(n, sig.functions()[f].arity))
        for (int j = 0; j < n; ++j)
          atoms.push_back(
              Formula::eq(Term::apply(f, args), Term::variable(j)));
    for (auto& a : atoms) {
      FormulaInContext fic{iota(n), a};
      Bits key = semantic_key(*mc_, layouts_[n], fic);
      add(n, std::move(a), std::move(key), 0);
    }
  }

  for (int d = 1; d <= options_.depth; ++d) {
    for (int n = 0; n <= top_ctx; ++n) {
      if (max_level(n) < d) continue;
      const std::size_t before = classes_[n].size();
      const std::size_t classes_before_level = before;
      for (std::size_t j = 0; j < classes_before_level; ++j)
        for (std::size_t i = 0; i <= j; ++i) {
          if (classes_[n][i].level != d - 1 && classes_[n][j].level != d - 1)
            continue;
          if (i == j) continue;
          Bits k = classes_[n][i].key & classes_[n][j].key;
          add(n,
              Formula::conj({classes_[n][i].representative.body,
                             classes_[n][j].representative.body}),
              std::move(k), d);
          if (options_.horn_only) continue;
          Bits o = classes_[n][i].key | classes_[n][j].key;
          add(n,
              Formula::disj({classes_[n][i].representative.body,
                             classes_[n][j].representative.body}),
              std::move(o), d);
        }
      if (!options_.horn_only && n + 1 <= top_ctx) {
        const auto& inner = classes_[n + 1];
        const std::size_t count = inner.size();
        for (std::size_t i = 0; i < count; ++i) {
          if (inner[i].level != d - 1) continue;
          Bits k = project_last(*mc_, layouts_[n + 1], layouts_[n], inner[i].key);
          add(n, Formula::exists(n, inner[i].representative.body), std::move(k), d);
        }
      }
      saturated_[n] = classes_[n].size() == before;
    }
  }
}

void FormulaCatalog::add(int arity, Formula f, Bits key, int level) {
  auto& idx = index_[arity];
  if (idx.count(key)) return;
  if (classes_[arity].size() >= options_.max_classes)
    throw LimitExceeded("formula catalog exceeds class limit in context " +
                            std::to_string(arity),
                        static_cast<double>(classes_[arity].size()));
  FormulaInContext fic = canonical_form(FormulaInContext{iota(arity), std::move(f)});
  idx.emplace(key, static_cast<int>(classes_[arity].size()));
  classes_[arity].push_back({std::move(fic), std::move(key), level});
}

const std::vector<DefinableClass>& FormulaCatalog::classes(int arity) const {
  return classes_.at(arity);
}

std::optional<int> FormulaCatalog::find(int arity, const Bits& key) const {
  const auto& idx = index_.at(arity);
  auto it = idx.find(key);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

}  // namespace geodual
