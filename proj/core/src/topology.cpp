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

#include "geodual/topology.hpp"

#include <set>

#include "geodual/error.hpp"

namespace geodual {

PointSet make_set(std::size_t n, std::initializer_list<std::size_t> points) {
  PointSet s(n);
  for (auto p : points) s.set(p);
  return s;
}

PointSet make_set(std::size_t n, const std::vector<int>& points) {
  PointSet s(n);
  for (int p : points) s.set(static_cast<std::size_t>(p));
  return s;
}

std::vector<int> members(const PointSet& s) {
  std::vector<int> out;
  for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    out.push_back(static_cast<int>(p));
  return out;
}

bool subset_of(const PointSet& a, const PointSet& b) { return a.is_subset_of(b); }

FinSpace::FinSpace(std::size_t points, std::vector<std::string> names,
                   std::vector<PointSet> subbasis)
    : points_(points), names_(std::move(names)), subbasis_(std::move(subbasis)) {
  if (names_.size() != subbasis_.size())
    throw PreconditionError("subbasis names and sets differ in length");
  for (const auto& s : subbasis_)
    if (s.size() != points_) throw PreconditionError("subbasic set of wrong size");
  nbhd_.assign(points_, full());
  for (const auto& s : subbasis_)
    for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
      nbhd_[p] &= s;
}

bool FinSpace::is_open(const PointSet& s) const {
  for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    if (!nbhd_[p].is_subset_of(s)) return false;
  return true;
}

PointSet FinSpace::hull(const PointSet& s) const {
  PointSet out = empty();
  for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    out |= nbhd_[p];
  return out;
}

PointSet FinSpace::interior(const PointSet& s) const {
  PointSet out = empty();
  for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    if (nbhd_[p].is_subset_of(s)) out.set(p);
  return out;
}

bool FinSpace::is_t0() const {
  std::set<PointSet> seen(nbhd_.begin(), nbhd_.end());
  return seen.size() == nbhd_.size();
}

std::vector<PointSet> FinSpace::opens(std::size_t limit) const {
  // Opens are exactly the unions of minimal neighbourhoods.
  std::set<PointSet> found{empty()};
  std::set<PointSet> gens(nbhd_.begin(), nbhd_.end());
  for (const auto& g : gens) {
    std::vector<PointSet> added;
    for (const auto& o : found) {
      PointSet u = o | g;
      if (!found.count(u)) added.push_back(std::move(u));
    }
    for (auto& u : added) found.insert(std::move(u));
    if (found.size() > limit)
      throw LimitExceeded("open-set lattice exceeds limit", static_cast<double>(found.size()));
  }
  return {found.begin(), found.end()};
}

PointSet preimage(const std::vector<int>& f, const PointSet& s) {
  PointSet out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (s.test(static_cast<std::size_t>(f[i]))) out.set(i);
  return out;
}

PointSet image(const std::vector<int>& f, const PointSet& s, std::size_t target_size) {
  PointSet out(target_size);
  for (auto p = s.find_first(); p != PointSet::npos; p = s.find_next(p))
    out.set(static_cast<std::size_t>(f[p]));
  return out;
}

bool is_continuous(const FinSpace& X, const FinSpace& Y, const std::vector<int>& f) {
  if (f.size() != X.size()) throw PreconditionError("map has wrong domain size");
  for (const auto& s : Y.subbasis())
    if (!X.is_open(preimage(f, s))) return false;
  return true;
}

bool is_open_map(const FinSpace& X, const FinSpace& Y, const std::vector<int>& f) {
  for (std::size_t p = 0; p < X.size(); ++p)
    if (!Y.is_open(image(f, X.neighborhood(p), Y.size()))) return false;
  return true;
}

std::vector<CPFilter> cp_filters(const FinSpace& X) {
  // A completely prime open is not covered by the opens that miss it. Every
  // open is a union of minimal neighbourhoods, so only those can qualify,
  // and an open misses m exactly when its neighbourhoods do.
  std::set<PointSet> candidates;
  for (std::size_t p = 0; p < X.size(); ++p) candidates.insert(X.neighborhood(p));
  std::vector<CPFilter> out;
  for (const auto& m : candidates) {
    PointSet cover = X.empty();
    for (std::size_t q = 0; q < X.size(); ++q)
      if (!m.is_subset_of(X.neighborhood(q))) cover |= X.neighborhood(q);
    if (!m.is_subset_of(cover)) out.push_back({m});
  }
  return out;
}

CPFilter neighborhood_filter(const FinSpace& X, std::size_t p) {
  return {X.neighborhood(p)};
}

}  // namespace geodual
