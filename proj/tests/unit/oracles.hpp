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

// Brute-force reference computations. None of these call into the library
// code they are compared against beyond reading its data.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "geodual/duality.hpp"
#include "geodual/parser.hpp"

namespace oracle {

using geodual::PointSet;

inline std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::uint64_t stirling2(int n, int k) {
  if (n == 0 && k == 0) return 1;
  if (n == 0 || k == 0) return 0;
  return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

inline std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Sum over subsets of size k and partitions into b blocks of weight(b).
inline std::uint64_t count_by_blocks(int n, const std::function<std::uint64_t(int)>& weight) {
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k)
    for (int b = 0; b <= k; ++b) total += binom(n, k) * stirling2(k, b) * weight(b);
  return total;
}

// Models of the empty theory: quotients of subsets.
inline std::uint64_t set_models(int n) {
  return count_by_blocks(n, [](int) { return 1; });
}

// Isomorphisms between quotients with b blocks: b! for each ordered pair.
inline std::uint64_t set_isos(int n) {
  std::uint64_t total = 0;
  for (int b = 0; b <= n; ++b) {
    std::uint64_t with_b = 0;
    for (int k = b; k <= n; ++k) with_b += binom(n, k) * stirling2(k, b);
    total += with_b * with_b * factorial(b);
  }
  return total;
}

// A symmetric relation on b blocks.
inline std::uint64_t symmetric_models(int n) {
  return count_by_blocks(n, [](int b) { return std::uint64_t{1} << (b * (b + 1) / 2); });
}

// Isomorphisms of symmetric-relation structures: for each pair of carriers
// with b blocks, the pairs (E, bijection) with E' determined, i.e.
// (#relations) * b!. Counted per ordered pair of carriers.
inline std::uint64_t symmetric_isos(int n) {
  std::uint64_t total = 0;
  for (int b = 0; b <= n; ++b) {
    std::uint64_t carriers = 0;
    for (int k = b; k <= n; ++k) carriers += binom(n, k) * stirling2(k, b);
    total += carriers * carriers * factorial(b) * (std::uint64_t{1} << (b * (b + 1) / 2));
  }
  return total;
}

// Opens generated by a subbasis: finite intersections, then unions.
inline std::set<PointSet> generated_opens(std::size_t n, const std::vector<PointSet>& subbasis) {
  std::set<PointSet> basis{PointSet(n).set()};
  for (const auto& s : subbasis) {
    std::vector<PointSet> add;
    for (const auto& b : basis) add.push_back(b & s);
    basis.insert(add.begin(), add.end());
  }
  std::set<PointSet> opens{PointSet(n)};
  for (const auto& b : basis) {
    std::vector<PointSet> add;
    for (const auto& o : opens) add.push_back(o | b);
    opens.insert(add.begin(), add.end());
  }
  return opens;
}

inline std::set<PointSet> generated_opens(const geodual::FinSpace& X) {
  return generated_opens(X.size(), X.subbasis());
}

inline PointSet bits_of(std::size_t n, std::uint64_t mask) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1) s.set(i);
  return s;
}

// Stable opens by testing every subset of the total space.
inline std::vector<PointSet> stable_opens(const geodual::EquivariantSheaf& s) {
  const std::size_t n = s.size();
  const auto opens = generated_opens(s.total());
  std::vector<PointSet> out;
  for (const auto& o : opens) {
    bool stable = true;
    for (std::size_t f = 0; f < s.base().arrow_count() && stable; ++f)
      for (int p : s.fiber(s.base().dom(static_cast<int>(f))))
        if (o.test(p) && !o.test(s.act(static_cast<int>(f), p))) stable = false;
    if (stable) out.push_back(o);
  }
  (void)n;
  return out;
}

// Nonempty open arrow sets closed under inverse and composition.
inline std::vector<PointSet> open_subgroupoids(const geodual::TopGroupoid& g) {
  const std::size_t n = g.arrow_count();
  std::vector<PointSet> out;
  for (const auto& N : generated_opens(g.arrows())) {
    if (N.none()) continue;
    bool ok = true;
    for (std::size_t f = 0; f < n && ok; ++f) {
      if (!N.test(f)) continue;
      if (!N.test(g.inverse(static_cast<int>(f)))) ok = false;
      for (std::size_t h = 0; h < n && ok; ++h)
        if (N.test(h) && g.cod(static_cast<int>(f)) == g.dom(static_cast<int>(h)) &&
            !N.test(g.compose(static_cast<int>(h), static_cast<int>(f))))
          ok = false;
    }
    if (ok) out.push_back(N);
  }
  return out;
}

// Orbit closure by repeated single steps until nothing changes.
inline PointSet orbit_closure(const geodual::EquivariantSheaf& s, PointSet seed) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < s.base().arrow_count(); ++f)
      for (int p : s.fiber(s.base().dom(static_cast<int>(f))))
        if (seed.test(p) && !seed.test(s.act(static_cast<int>(f), p))) {
          seed.set(s.act(static_cast<int>(f), p));
          changed = true;
        }
  }
  return seed;
}

}  // namespace oracle

namespace fixture {

inline geodual::TheoryPtr theory(const std::string& text) {
  return std::make_shared<const geodual::Theory>(geodual::parse_theory(text));
}

inline geodual::TheoryPtr equality() { return theory(""); }
inline geodual::TheoryPtr symmetric() { return theory("rel E/2\naxiom E(x,y) |- [x,y] E(y,x)\n"); }
inline geodual::TheoryPtr inconsistent() { return theory("axiom top |- [] bot\n"); }

inline std::shared_ptr<const geodual::ModelClass> models(geodual::TheoryPtr T, int n) {
  return std::make_shared<const geodual::ModelClass>(
      geodual::build_model_class(std::move(T), geodual::IndexSet(n)));
}

inline geodual::ModelGroupoid groupoid(geodual::TheoryPtr T, int n) {
  return geodual::build_model_groupoid(models(std::move(T), n));
}

inline std::vector<int> ints(const geodual::PointSet& s) { return geodual::members(s); }

}  // namespace fixture
