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

// Bounded search over formulas-in-context, deduplicated by extension across
// a model class.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "geodual/structures.hpp"

namespace geodual {

using Bits = boost::dynamic_bitset<>;

// Bit layout of a key in context n: models in class order, and within a
// model the tuples of its blocks in lexicographic order.
class KeyLayout {
 public:
  KeyLayout(const ModelClass& mc, int arity);

  int arity() const { return arity_; }
  std::size_t size() const { return total_; }
  std::size_t offset(int model) const { return offsets_[model]; }
  std::size_t count(int model) const { return offsets_[model + 1] - offsets_[model]; }
  std::size_t bit(int model, std::span<const int> tuple) const;
  // Model and tuple of a bit position.
  std::pair<int, BlockTuple> locate(std::size_t bit) const;

 private:
  const ModelClass* mc_;
  int arity_;
  std::vector<std::size_t> offsets_;
  std::size_t total_;
};

Bits semantic_key(const ModelClass& mc, const KeyLayout& layout,
                  const FormulaInContext& f);

struct DefinableClass {
  FormulaInContext representative;
  Bits key;
  int level = 0;
};

struct CatalogOptions {
  int max_context = 1;
  int depth = 3;
  bool horn_only = false;
  std::size_t max_classes = 200000;
};

class FormulaCatalog {
 public:
  FormulaCatalog(std::shared_ptr<const ModelClass> mc, CatalogOptions options);

  const ModelClass& model_class() const { return *mc_; }
  std::shared_ptr<const ModelClass> model_class_ptr() const { return mc_; }
  const CatalogOptions& options() const { return options_; }
  const KeyLayout& layout(int arity) const { return layouts_.at(arity); }
  const std::vector<DefinableClass>& classes(int arity) const;
  std::optional<int> find(int arity, const Bits& key) const;
  // True when the last level added no class in this context.
  bool saturated(int arity) const { return saturated_.at(arity); }

 private:
  void add(int arity, Formula f, Bits key, int level);

  std::shared_ptr<const ModelClass> mc_;
  CatalogOptions options_;
  std::vector<KeyLayout> layouts_;
  std::vector<std::vector<DefinableClass>> classes_;
  std::vector<std::map<Bits, int>> index_;
  std::vector<bool> saturated_;
};

// Key of the existential projection dropping the last variable.
Bits project_last(const ModelClass& mc, const KeyLayout& from,
                  const KeyLayout& to, const Bits& key);

}  // namespace geodual
