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

// Structures whose carrier is a quotient of a subset of a finite index set,
// their enumeration, evaluation of formulas, and isomorphisms.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geodual/logic.hpp"

namespace geodual {

class IndexSet {
 public:
  static constexpr int kMaxSize = 16;

  explicit IndexSet(int size);

  int size() const { return size_; }
  bool contains(int e) const { return e >= 0 && e < size_; }
  bool operator==(const IndexSet&) const = default;

 private:
  int size_;
};

using BlockTuple = std::vector<int>;

// Number of k-tuples over b blocks, and the lexicographic rank of a tuple.
std::size_t tuple_count(int blocks, int arity);
std::size_t tuple_rank(std::span<const int> tuple, int blocks);
BlockTuple tuple_unrank(std::size_t rank, int blocks, int arity);

class IndexedStructure {
 public:
  IndexedStructure() = default;

  // Relations start empty, functions start at block 0. Blocks may be given
  // in any order; they are sorted by minimal element.
  static IndexedStructure from_partition(int index_size,
                                         std::vector<std::vector<int>> blocks,
                                         const Signature& sig);

  int index_size() const { return index_size_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  std::vector<int> domain() const;
  std::uint32_t domain_mask() const;
  bool defined(int element) const;
  int block_of(int element) const;  // -1 when undefined
  int block_key(int block) const { return blocks_[block].front(); }

  int relation_count() const { return static_cast<int>(rels_.size()); }
  int function_count() const { return static_cast<int>(funs_.size()); }
  int relation_arity(int r) const { return rel_arity_[r]; }
  int function_arity(int f) const { return fun_arity_[f]; }

  bool holds(int rel, std::span<const int> tuple) const;
  int apply(int fun, std::span<const int> tuple) const;
  void set_relation(int rel, std::span<const int> tuple, bool value);
  void set_function(int fun, std::span<const int> tuple, int value);

  const std::vector<std::uint8_t>& relation_table(int r) const { return rels_[r]; }
  const std::vector<int>& function_table(int f) const { return funs_[f]; }
  std::vector<std::uint8_t>& relation_table(int r) { return rels_[r]; }
  std::vector<int>& function_table(int f) { return funs_[f]; }

  bool matches(const Signature& sig) const;
  std::string label() const;

  auto operator<=>(const IndexedStructure&) const = default;

 private:
  int index_size_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
  std::vector<int> rel_arity_;
  std::vector<int> fun_arity_;
  std::vector<std::vector<std::uint8_t>> rels_;
  std::vector<std::vector<int>> funs_;
};

struct Limits {
  double max_structures = 2e6;
  double max_isomorphisms = 2e6;
};

// Estimated number of structures; exact for relational signatures.
double estimate_structure_count(const Signature& sig, const IndexSet& S);

// Canonical order: subsets of S by bitmask, partitions in restricted growth
// string order, then symbol tables (first symbol outermost, each table in
// bitmask / base-b counter order).
std::vector<IndexedStructure> enumerate_structures(const Signature& sig,
                                                   const IndexSet& S,
                                                   const Limits& limits = {});

// Set partitions of the given sorted elements, in RGS order.
std::vector<std::vector<std::vector<int>>> set_partitions(
    const std::vector<int>& elements);

// Tarskian satisfaction; env maps variable ids to blocks.
bool holds(const IndexedStructure& M, const Formula& f, std::vector<int>& env);
bool satisfies(const IndexedStructure& M, const FormulaInContext& f,
               std::span<const int> tuple);
// Extension as a bit per tuple in lexicographic tuple order.
std::vector<std::uint8_t> extension_bits(const IndexedStructure& M,
                                         const FormulaInContext& f);
std::vector<BlockTuple> eval_formula(const IndexedStructure& M,
                                     const FormulaInContext& f,
                                     const Signature& sig);
bool satisfies(const IndexedStructure& M, const Sequent& s);
bool is_model(const IndexedStructure& M, const Theory& T);

bool is_isomorphism(const IndexedStructure& M, const IndexedStructure& N,
                    const std::vector<int>& map);
std::vector<std::vector<int>> enumerate_isomorphisms(const IndexedStructure& M,
                                                     const IndexedStructure& N);

// Rebuilds M on a new partition of S; map[i] is the block of the result
// that block i of M is sent to.
std::pair<IndexedStructure, std::vector<int>> transport(
    const IndexedStructure& M, const std::vector<std::vector<int>>& partition);

struct StructIso {
  int dom = 0;
  int cod = 0;
  std::vector<int> map;

  auto operator<=>(const StructIso&) const = default;
};

class ModelClass {
 public:
  ModelClass(TheoryPtr theory, IndexSet S, std::vector<IndexedStructure> models);

  const Theory& theory() const { return *theory_; }
  TheoryPtr theory_ptr() const { return theory_; }
  const Signature& signature() const { return theory_->signature; }
  const IndexSet& index_set() const { return S_; }
  const std::vector<IndexedStructure>& models() const { return models_; }
  const IndexedStructure& model(int i) const { return models_[i]; }
  const std::vector<StructIso>& isos() const { return isos_; }
  const StructIso& iso(int i) const { return isos_[i]; }
  int model_count() const { return static_cast<int>(models_.size()); }
  int iso_count() const { return static_cast<int>(isos_.size()); }

  std::optional<int> find_model(const IndexedStructure& M) const;
  std::optional<int> find_iso(int dom, int cod, const std::vector<int>& map) const;
  int identity(int model) const;
  int inverse(int iso) const;
  // Composite g after f; requires cod(f) == dom(g).
  int compose(int g, int f) const;
  const std::vector<int>& isos_between(int dom, int cod) const;

 private:
  TheoryPtr theory_;
  IndexSet S_;
  std::vector<IndexedStructure> models_;
  std::map<IndexedStructure, int> model_index_;
  std::vector<StructIso> isos_;
  std::map<std::pair<int, int>, std::vector<int>> by_pair_;
};

ModelClass build_model_class(TheoryPtr T, const IndexSet& S,
                             const Limits& limits = {});
// Filter of enumerate_structures; the reference for build_model_class.
ModelClass build_model_class_exhaustive(TheoryPtr T, const IndexSet& S,
                                        const Limits& limits = {});

bool entails(const ModelClass& mc, const Sequent& s);
bool entails(TheoryPtr T, const IndexSet& S, const Sequent& s,
             const Limits& limits = {});

IndexedStructure reduct(const IndexedStructure& M, const Interpretation& F);

struct StarResult {
  IndexedStructure model;
  std::vector<int> map;  // blocks of M to blocks of the result
};

// Whether a surjection S -> blocks(M) sending b_i to [a_i] exists.
bool star_headroom(const IndexedStructure& M, const std::vector<int>& a,
                   const std::vector<int>& b);
StarResult star_lemma(const IndexedStructure& M, const std::vector<int>& a,
                      const std::vector<int>& b);

}  // namespace geodual
