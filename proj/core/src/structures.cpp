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

#include "geodual/structures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "geodual/error.hpp"

namespace geodual {

IndexSet::IndexSet(int size) : size_(size) {
  if (size < 1 || size > kMaxSize)
    throw PreconditionError("index set size must be in 1.." +
                            std::to_string(kMaxSize));
}

std::size_t tuple_count(int blocks, int arity) {
  std::size_t n = 1;
  for (int i = 0; i < arity; ++i) n *= static_cast<std::size_t>(blocks);
  return n;
}

std::size_t tuple_rank(std::span<const int> tuple, int blocks) {
  std::size_t r = 0;
  for (int v : tuple) r = r * static_cast<std::size_t>(blocks) + v;
  return r;
}

BlockTuple tuple_unrank(std::size_t rank, int blocks, int arity) {
  BlockTuple t(arity);
  for (int i = arity - 1; i >= 0; --i) {
    t[i] = static_cast<int>(rank % blocks);
    rank /= blocks;
  }
  return t;
}

// ---------------------------------------------------------------- structure

IndexedStructure IndexedStructure::from_partition(
    int index_size, std::vector<std::vector<int>> blocks, const Signature& sig) {
  IndexedStructure M;
  M.index_size_ = index_size;
  M.block_of_.assign(index_size, -1);
  for (auto& b : blocks) {
    if (b.empty()) throw PreconditionError("empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int e : blocks[i]) {
      if (e < 0 || e >= index_size)
        throw PreconditionError("block element outside the index set");
      if (M.block_of_[e] != -1)
        throw PreconditionError("blocks overlap");
      M.block_of_[e] = static_cast<int>(i);
    }
  M.blocks_ = std::move(blocks);
  const int b = M.block_count();
  for (const auto& r : sig.relations()) {
    M.rel_arity_.push_back(r.arity);
    M.rels_.emplace_back(tuple_count(b, r.arity), 0);
  }
  for (const auto& f : sig.functions()) {
    M.fun_arity_.push_back(f.arity);
    M.funs_.emplace_back(tuple_count(b, f.arity), 0);
  }
  return M;
}

std::vector<int> IndexedStructure::domain() const {
  std::vector<int> out;
  for (int e = 0; e < index_size_; ++e)
    if (block_of_[e] >= 0) out.push_back(e);
  return out;
}

std::uint32_t IndexedStructure::domain_mask() const {
  std::uint32_t m = 0;
  for (int e = 0; e < index_size_; ++e)
    if (block_of_[e] >= 0) m |= 1u << e;
  return m;
}

bool IndexedStructure::defined(int element) const {
  return element >= 0 && element < index_size_ && block_of_[element] >= 0;
}

int IndexedStructure::block_of(int element) const {
  return element >= 0 && element < index_size_ ? block_of_[element] : -1;
}

bool IndexedStructure::holds(int rel, std::span<const int> tuple) const {
  return rels_[rel][tuple_rank(tuple, block_count())] != 0;
}

int IndexedStructure::apply(int fun, std::span<const int> tuple) const {
  return funs_[fun][tuple_rank(tuple, block_count())];
}

void IndexedStructure::set_relation(int rel, std::span<const int> tuple,
                                    bool value) {
  rels_[rel][tuple_rank(tuple, block_count())] = value ? 1 : 0;
}

void IndexedStructure::set_function(int fun, std::span<const int> tuple,
                                    int value) {
  funs_[fun][tuple_rank(tuple, block_count())] = value;
}

bool IndexedStructure::matches(const Signature& sig) const {
  if (sig.relations().size() != rels_.size() ||
      sig.functions().size() != funs_.size())
    return false;
  for (std::size_t r = 0; r < rels_.size(); ++r)
    if (sig.relations()[r].arity != rel_arity_[r]) return false;
  for (std::size_t f = 0; f < funs_.size(); ++f)
    if (sig.functions()[f].arity != fun_arity_[f]) return false;
  return true;
}

std::string IndexedStructure::label() const {
  std::string out = "{";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += "|";
    for (std::size_t j = 0; j < blocks_[i].size(); ++j) {
      if (j) out += ",";
      out += std::to_string(blocks_[i][j]);
    }
  }
  out += "}";
  for (const auto& t : rels_) {
    out += ":";
    for (auto v : t) out += v ? '1' : '0';
  }
  for (const auto& t : funs_) {
    out += ":";
    for (auto v : t) out += std::to_string(v);
  }
  return out;
}

// ---------------------------------------------------------------- enumeration

std::vector<std::vector<std::vector<int>>> set_partitions(
    const std::vector<int>& elements) {
  std::vector<std::vector<std::vector<int>>> out;
  const std::size_t n = elements.size();
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<int> rgs(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int maxv) {
    if (i == n) {
      std::vector<std::vector<int>> blocks(maxv + 1);
      for (std::size_t k = 0; k < n; ++k) blocks[rgs[k]].push_back(elements[k]);
      out.push_back(std::move(blocks));
      return;
    }
    for (int v = 0; v <= maxv + 1; ++v) {
      rgs[i] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

static double stirling2(int n, int k) {
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j)
      s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

static double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

static double tables_per_carrier(const Signature& sig, int b) {
  double total = 1;
  for (const auto& r : sig.relations())
    total *= std::pow(2.0, std::pow(static_cast<double>(b), r.arity));
  for (const auto& f : sig.functions())
    total *= std::pow(static_cast<double>(b), std::pow(static_cast<double>(b), f.arity));
  return total;
}

double estimate_structure_count(const Signature& sig, const IndexSet& S) {
  const int n = S.size();
  double total = 0;
  for (int k = 0; k <= n; ++k)
    for (int b = 0; b <= k; ++b)
      total += binomial(n, k) * stirling2(k, b) * tables_per_carrier(sig, b);
  return total;
}

namespace {

// Counter over the values of one symbol table.
struct TableCounter {
  bool relation;
  std::size_t entries;
  int base;  // 2 for relations, b for functions
};

std::vector<TableCounter> table_counters(const Signature& sig, int b) {
  std::vector<TableCounter> out;
  for (const auto& r : sig.relations())
    out.push_back({true, tuple_count(b, r.arity), 2});
  for (const auto& f : sig.functions())
    out.push_back({false, tuple_count(b, f.arity), b});
  return out;
}

// Advances a base-`base` counter stored in `digits`; false on wraparound.
template <class T>
bool increment(std::vector<T>& digits, int base) {
  for (auto& d : digits) {
    if (static_cast<int>(d) + 1 < base) {
      ++d;
      return true;
    }
    d = 0;
  }
  return false;
}

// Visits every assignment of symbol tables over a carrier, first symbol
// outermost. The visitor sees the structure after each symbol is set and may
// prune by returning false.
class TableSearch {
 public:
  using Check = std::function<bool(const IndexedStructure&, int symbol)>;
  using Emit = std::function<void(const IndexedStructure&)>;

  TableSearch(IndexedStructure base, const Signature& sig, Check check, Emit emit)
      : M_(std::move(base)),
        counters_(table_counters(sig, M_.block_count())),
        check_(std::move(check)),
        emit_(std::move(emit)),
        nrel_(static_cast<int>(sig.relations().size())) {}

  void run() { rec(0); }

 private:
  void rec(int sym) {
    if (sym == static_cast<int>(counters_.size())) {
      emit_(M_);
      return;
    }
    const auto& c = counters_[sym];
    if (!c.relation && c.base == 0 && c.entries > 0) return;  // no values
    if (c.relation) {
      auto& table = M_.relation_table(sym);
      std::fill(table.begin(), table.end(), 0);
      do {
        if (!check_ || check_(M_, sym)) rec(sym + 1);
      } while (increment(table, 2));
    } else {
      auto& table = M_.function_table(sym - nrel_);
      std::fill(table.begin(), table.end(), 0);
      do {
        if (!check_ || check_(M_, sym)) rec(sym + 1);
      } while (c.entries > 0 && increment(table, c.base));
    }
  }

  IndexedStructure M_;
  std::vector<TableCounter> counters_;
  Check check_;
  Emit emit_;
  int nrel_;
};

template <class Visit>
void for_each_carrier(const Signature& sig, const IndexSet& S, Visit visit) {
  const int n = S.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> elems;
    for (int e = 0; e < n; ++e)
      if (mask & (1u << e)) elems.push_back(e);
    for (auto& p : set_partitions(elems))
      visit(IndexedStructure::from_partition(n, std::move(p), sig));
  }
}

void check_limit(const Signature& sig, const IndexSet& S, const Limits& limits) {
  const double est = estimate_structure_count(sig, S);
  if (est > limits.max_structures)
    throw LimitExceeded("structure enumeration exceeds limit of " +
                            std::to_string(static_cast<long long>(limits.max_structures)),
                        est);
}

}  // namespace

std::vector<IndexedStructure> enumerate_structures(const Signature& sig,
                                                   const IndexSet& S,
                                                   const Limits& limits) {
  check_limit(sig, S, limits);
  std::vector<IndexedStructure> out;
  for_each_carrier(sig, S, [&](IndexedStructure base) {
    TableSearch(std::move(base), sig, nullptr,
                [&](const IndexedStructure& M) { out.push_back(M); })
        .run();
  });
  return out;
}

// ---------------------------------------------------------------- evaluation

namespace {

int eval_term(const IndexedStructure& M, const Term& t, const std::vector<int>& env) {
  if (t.is_var()) return env[t.var];
  int buf[8];
  std::vector<int> big;
  int* args = buf;
  if (t.args.size() > 8) {
    big.resize(t.args.size());
    args = big.data();
  }
  for (std::size_t i = 0; i < t.args.size(); ++i) args[i] = eval_term(M, t.args[i], env);
  return M.apply(t.fun, std::span<const int>(args, t.args.size()));
}

void ensure_env(std::vector<int>& env, VarId max) {
  if (static_cast<int>(env.size()) <= max) env.resize(max + 1, 0);
}

void check_signature(const IndexedStructure& M, const Formula& f) {
  if (f.kind == Formula::Kind::Rel && f.rel >= M.relation_count())
    throw SignatureMismatch("relation symbol not interpreted by structure");
  for (const auto& t : f.terms) {
    std::function<void(const Term&)> walk = [&](const Term& u) {
      if (!u.is_var() && u.fun >= M.function_count())
        throw SignatureMismatch("function symbol not interpreted by structure");
      for (const auto& a : u.args) walk(a);
    };
    walk(t);
  }
  for (const auto& s : f.subs) check_signature(M, s);
}

}  // namespace

bool holds(const IndexedStructure& M, const Formula& f, std::vector<int>& env) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Top:
      return true;
    case K::Bot:
      return false;
    case K::Eq:
      return eval_term(M, f.terms[0], env) == eval_term(M, f.terms[1], env);
    case K::Rel: {
      int buf[8];
      std::vector<int> big;
      int* args = buf;
      if (f.terms.size() > 8) {
        big.resize(f.terms.size());
        args = big.data();
      }
      for (std::size_t i = 0; i < f.terms.size(); ++i)
        args[i] = eval_term(M, f.terms[i], env);
      return M.holds(f.rel, std::span<const int>(args, f.terms.size()));
    }
    case K::And:
      for (const auto& s : f.subs)
        if (!holds(M, s, env)) return false;
      return true;
    case K::Or:
      for (const auto& s : f.subs)
        if (holds(M, s, env)) return true;
      return false;
    case K::Exists: {
      ensure_env(env, f.bound);
      const int saved = env[f.bound];
      bool found = false;
      for (int b = 0; b < M.block_count() && !found; ++b) {
        env[f.bound] = b;
        found = holds(M, f.subs.front(), env);
      }
      env[f.bound] = saved;
      return found;
    }
  }
  return false;
}

bool satisfies(const IndexedStructure& M, const FormulaInContext& f,
               std::span<const int> tuple) {
  std::vector<int> env;
  ensure_env(env, std::max(max_var(f.body), f.arity() - 1));
  for (std::size_t i = 0; i < f.context.size(); ++i) {
    ensure_env(env, f.context[i]);
    env[f.context[i]] = tuple[i];
  }
  return holds(M, f.body, env);
}

std::vector<std::uint8_t> extension_bits(const IndexedStructure& M,
                                         const FormulaInContext& f) {
  check_signature(M, f.body);
  const int b = M.block_count();
  const int k = f.arity();
  const std::size_t n = tuple_count(b, k);
  std::vector<std::uint8_t> out(n, 0);
  VarId mx = max_var(f.body);
  for (VarId v : f.context) mx = std::max(mx, v);
  std::vector<int> env(mx + 1, 0);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t rest = r;
    for (int i = k - 1; i >= 0; --i) {
      env[f.context[i]] = static_cast<int>(rest % b);
      rest /= b;
    }
    out[r] = holds(M, f.body, env) ? 1 : 0;
  }
  return out;
}

std::vector<BlockTuple> eval_formula(const IndexedStructure& M,
                                     const FormulaInContext& f,
                                     const Signature& sig) {
  if (!M.matches(sig)) throw SignatureMismatch("structure does not match signature");
  check_well_formed(sig, f);
  auto bits = extension_bits(M, f);
  std::vector<BlockTuple> out;
  for (std::size_t r = 0; r < bits.size(); ++r)
    if (bits[r]) out.push_back(tuple_unrank(r, M.block_count(), f.arity()));
  return out;
}

bool satisfies(const IndexedStructure& M, const Sequent& s) {
  const int b = M.block_count();
  const int k = static_cast<int>(s.context.size());
  VarId mx = std::max(max_var(s.antecedent), max_var(s.succedent));
  for (VarId v : s.context) mx = std::max(mx, v);
  std::vector<int> env(mx + 1, 0);
  const std::size_t n = tuple_count(b, k);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t rest = r;
    for (int i = k - 1; i >= 0; --i) {
      env[s.context[i]] = static_cast<int>(rest % b);
      rest /= b;
    }
    if (holds(M, s.antecedent, env) && !holds(M, s.succedent, env)) return false;
  }
  return true;
}

bool is_model(const IndexedStructure& M, const Theory& T) {
  if (!M.matches(T.signature))
    throw SignatureMismatch("structure does not match signature");
  for (const auto& ax : T.axioms)
    if (!satisfies(M, ax)) return false;
  return true;
}

// ---------------------------------------------------------------- isomorphisms

bool is_isomorphism(const IndexedStructure& M, const IndexedStructure& N,
                    const std::vector<int>& map) {
  const int b = M.block_count();
  if (N.block_count() != b || static_cast<int>(map.size()) != b) return false;
  if (M.relation_count() != N.relation_count() ||
      M.function_count() != N.function_count())
    return false;
  std::vector<char> hit(b, 0);
  for (int v : map) {
    if (v < 0 || v >= b || hit[v]) return false;
    hit[v] = 1;
  }
  BlockTuple image;
  for (int r = 0; r < M.relation_count(); ++r) {
    const int n = M.relation_arity(r);
    const auto& tm = M.relation_table(r);
    const auto& tn = N.relation_table(r);
    for (std::size_t i = 0; i < tm.size(); ++i) {
      image = tuple_unrank(i, b, n);
      for (auto& v : image) v = map[v];
      if (tm[i] != tn[tuple_rank(image, b)]) return false;
    }
  }
  for (int f = 0; f < M.function_count(); ++f) {
    const int n = M.function_arity(f);
    const auto& tm = M.function_table(f);
    const auto& tn = N.function_table(f);
    for (std::size_t i = 0; i < tm.size(); ++i) {
      image = tuple_unrank(i, b, n);
      for (auto& v : image) v = map[v];
      if (map[tm[i]] != tn[tuple_rank(image, b)]) return false;
    }
  }
  return true;
}

std::vector<std::vector<int>> enumerate_isomorphisms(const IndexedStructure& M,
                                                     const IndexedStructure& N) {
  std::vector<std::vector<int>> out;
  if (M.block_count() != N.block_count()) return out;
  std::vector<int> perm(M.block_count());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (is_isomorphism(M, N, perm)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::pair<IndexedStructure, std::vector<int>> transport(
    const IndexedStructure& M, const std::vector<std::vector<int>>& partition) {
  if (static_cast<int>(partition.size()) != M.block_count())
    throw PreconditionError("partition size differs from block count");
  // partition[i] becomes the image of block i.
  std::vector<std::vector<int>> sorted = partition;
  for (auto& b : sorted) std::sort(b.begin(), b.end());
  std::vector<int> order(sorted.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return sorted[x] < sorted[y]; });
  std::vector<int> map(sorted.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) map[order[pos]] = static_cast<int>(pos);

  IndexedStructure N;
  {
    Signature sig;
    for (int r = 0; r < M.relation_count(); ++r)
      sig.add_relation("r" + std::to_string(r), M.relation_arity(r));
    for (int f = 0; f < M.function_count(); ++f)
      sig.add_function("f" + std::to_string(f), M.function_arity(f));
    N = IndexedStructure::from_partition(M.index_size(), sorted, sig);
  }
  const int b = M.block_count();
  BlockTuple image;
  for (int r = 0; r < M.relation_count(); ++r) {
    const auto& tm = M.relation_table(r);
    for (std::size_t i = 0; i < tm.size(); ++i) {
      image = tuple_unrank(i, b, M.relation_arity(r));
      for (auto& v : image) v = map[v];
      N.set_relation(r, image, tm[i] != 0);
    }
  }
  for (int f = 0; f < M.function_count(); ++f) {
    const auto& tm = M.function_table(f);
    for (std::size_t i = 0; i < tm.size(); ++i) {
      image = tuple_unrank(i, b, M.function_arity(f));
      for (auto& v : image) v = map[v];
      N.set_function(f, image, map[tm[i]]);
    }
  }
  return {std::move(N), std::move(map)};
}

// ---------------------------------------------------------------- model class

ModelClass::ModelClass(TheoryPtr theory, IndexSet S,
                       std::vector<IndexedStructure> models)
    : theory_(std::move(theory)), S_(S), models_(std::move(models)) {
  for (int i = 0; i < model_count(); ++i) model_index_.emplace(models_[i], i);

  // Cheap invariant used to skip pairs that cannot be isomorphic.
  auto invariant = [](const IndexedStructure& M) {
    std::vector<long> key{M.block_count()};
    for (int r = 0; r < M.relation_count(); ++r) {
      long c = 0;
      for (auto v : M.relation_table(r)) c += v;
      key.push_back(c);
    }
    return key;
  };
  std::vector<std::vector<long>> inv;
  for (const auto& M : models_) inv.push_back(invariant(M));

  for (int d = 0; d < model_count(); ++d)
    for (int c = 0; c < model_count(); ++c) {
      if (inv[d] != inv[c]) continue;
      for (auto& m : enumerate_isomorphisms(models_[d], models_[c])) {
        by_pair_[{d, c}].push_back(static_cast<int>(isos_.size()));
        isos_.push_back({d, c, std::move(m)});
      }
    }
}

std::optional<int> ModelClass::find_model(const IndexedStructure& M) const {
  auto it = model_index_.find(M);
  if (it == model_index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& ModelClass::isos_between(int dom, int cod) const {
  static const std::vector<int> none;
  auto it = by_pair_.find({dom, cod});
  return it == by_pair_.end() ? none : it->second;
}

std::optional<int> ModelClass::find_iso(int dom, int cod,
                                        const std::vector<int>& map) const {
  for (int i : isos_between(dom, cod))
    if (isos_[i].map == map) return i;
  return std::nullopt;
}

int ModelClass::identity(int model) const {
  std::vector<int> id(models_[model].block_count());
  std::iota(id.begin(), id.end(), 0);
  return *find_iso(model, model, id);
}

int ModelClass::inverse(int iso) const {
  const auto& f = isos_[iso];
  std::vector<int> inv(f.map.size());
  for (std::size_t i = 0; i < f.map.size(); ++i) inv[f.map[i]] = static_cast<int>(i);
  return *find_iso(f.cod, f.dom, inv);
}

int ModelClass::compose(int g, int f) const {
  const auto& F = isos_[f];
  const auto& G = isos_[g];
  if (F.cod != G.dom) throw PreconditionError("composing non-composable isos");
  std::vector<int> m(F.map.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = G.map[F.map[i]];
  return *find_iso(F.dom, G.cod, m);
}

namespace {

std::set<int> symbols_of(const Formula& f, int nrel) {
  std::set<int> out;
  std::function<void(const Term&)> term = [&](const Term& t) {
    if (!t.is_var()) out.insert(nrel + t.fun);
    for (const auto& a : t.args) term(a);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind == Formula::Kind::Rel) out.insert(g.rel);
    for (const auto& t : g.terms) term(t);
    for (const auto& s : g.subs) walk(s);
  };
  walk(f);
  return out;
}

}  // namespace

ModelClass build_model_class(TheoryPtr T, const IndexSet& S, const Limits& limits) {
  const Signature& sig = T->signature;
  check_limit(sig, S, limits);
  const int nrel = static_cast<int>(sig.relations().size());
  const int nsym = nrel + static_cast<int>(sig.functions().size());

  // Each axiom is checked as soon as the last symbol it mentions is set.
  std::vector<std::vector<const Sequent*>> due(nsym + 1);
  for (const auto& ax : T->axioms) {
    auto syms = symbols_of(ax.antecedent, nrel);
    auto more = symbols_of(ax.succedent, nrel);
    syms.insert(more.begin(), more.end());
    const int last = syms.empty() ? -1 : *syms.rbegin();
    due[last + 1].push_back(&ax);
  }
  std::vector<IndexedStructure> models;
  for_each_carrier(sig, S, [&](IndexedStructure base) {
    for (const Sequent* ax : due[0])
      if (!satisfies(base, *ax)) return;
    TableSearch(
        std::move(base), sig,
        [&](const IndexedStructure& M, int sym) {
          for (const Sequent* ax : due[sym + 1])
            if (!satisfies(M, *ax)) return false;
          return true;
        },
        [&](const IndexedStructure& M) { models.push_back(M); })
        .run();
  });
  return ModelClass(std::move(T), S, std::move(models));
}

ModelClass build_model_class_exhaustive(TheoryPtr T, const IndexSet& S,
                                        const Limits& limits) {
  std::vector<IndexedStructure> models;
  for (auto& M : enumerate_structures(T->signature, S, limits))
    if (is_model(M, *T)) models.push_back(std::move(M));
  return ModelClass(std::move(T), S, std::move(models));
}

bool entails(const ModelClass& mc, const Sequent& s) {
  check_well_formed(mc.signature(), s);
  for (const auto& M : mc.models())
    if (!satisfies(M, s)) return false;
  return true;
}

bool entails(TheoryPtr T, const IndexSet& S, const Sequent& s, const Limits& limits) {
  return entails(build_model_class(std::move(T), S, limits), s);
}

// ---------------------------------------------------------------- reduct

IndexedStructure reduct(const IndexedStructure& M, const Interpretation& F) {
  if (!M.matches(F.target->signature))
    throw SignatureMismatch("structure does not match interpretation target");
  const Signature& sig = F.source->signature;
  IndexedStructure R = IndexedStructure::from_partition(M.index_size(), M.blocks(), sig);
  const int b = M.block_count();
  for (int r = 0; r < static_cast<int>(sig.relations().size()); ++r)
    R.relation_table(r) = extension_bits(M, F.relation_images.at(r));
  for (int f = 0; f < static_cast<int>(sig.functions().size()); ++f) {
    const int n = sig.functions()[f].arity;
    auto bits = extension_bits(M, F.function_images.at(f));
    auto& table = R.function_table(f);
    for (std::size_t i = 0; i < table.size(); ++i) {
      int value = -1;
      for (int y = 0; y < b; ++y)
        if (bits[i * b + y]) {
          if (value != -1)
            throw PreconditionError("image of " + sig.functions()[f].name +
                                    " is not functional");
          value = y;
        }
      if (value == -1)
        throw PreconditionError("image of " + sig.functions()[f].name +
                                " is not total");
      table[i] = value;
    }
    (void)n;
  }
  return R;
}

// ---------------------------------------------------------------- star lemma

namespace {

void check_star_input(const IndexedStructure& M, const std::vector<int>& a,
                      const std::vector<int>& b) {
  if (a.size() != b.size()) throw PreconditionError("tuple lengths differ");
  for (int e : a)
    if (!M.defined(e)) throw PreconditionError("a-entry not defined in model");
  std::vector<char> seen(M.index_size(), 0);
  for (int e : b) {
    if (e < 0 || e >= M.index_size()) throw PreconditionError("b-entry outside S");
    if (seen[e]) throw PreconditionError("b-entries are not distinct");
    seen[e] = 1;
  }
}

}  // namespace

bool star_headroom(const IndexedStructure& M, const std::vector<int>& a,
                   const std::vector<int>& b) {
  check_star_input(M, a, b);
  std::set<int> hit;
  for (int e : a) hit.insert(M.block_of(e));
  const int free_elements = M.index_size() - static_cast<int>(b.size());
  const int unhit = M.block_count() - static_cast<int>(hit.size());
  if (M.block_count() == 0) return false;
  return free_elements >= unhit;
}

StarResult star_lemma(const IndexedStructure& M, const std::vector<int>& a,
                      const std::vector<int>& b) {
  if (!star_headroom(M, a, b))
    throw HeadroomViolation("no surjection of the index set onto the blocks "
                            "extends the requested assignment");
  const int n = M.index_size();
  std::vector<int> p(n, -1);
  std::vector<char> hit(M.block_count(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    p[b[i]] = M.block_of(a[i]);
    hit[p[b[i]]] = 1;
  }
  int cursor = 0;
  for (int blk = 0; blk < M.block_count(); ++blk) {
    if (hit[blk]) continue;
    while (p[cursor] != -1) ++cursor;
    p[cursor] = blk;
  }
  for (int e = 0; e < n; ++e)
    if (p[e] == -1) p[e] = 0;
  std::vector<std::vector<int>> fibers(M.block_count());
  for (int e = 0; e < n; ++e) fibers[p[e]].push_back(e);
  auto [N, map] = transport(M, fibers);
  return {std::move(N), std::move(map)};
}

}  // namespace geodual
