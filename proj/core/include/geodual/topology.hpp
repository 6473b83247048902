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

// Finite topological spaces presented by a named subbasis.

#pragma once

#include <string>
#include <vector>

#include "geodual/catalog.hpp"

namespace geodual {

using PointSet = Bits;

PointSet make_set(std::size_t n, std::initializer_list<std::size_t> points);
PointSet make_set(std::size_t n, const std::vector<int>& points);
std::vector<int> members(const PointSet& s);
bool subset_of(const PointSet& a, const PointSet& b);

class FinSpace {
 public:
  FinSpace() = default;
  FinSpace(std::size_t points, std::vector<std::string> names,
           std::vector<PointSet> subbasis);

  std::size_t size() const { return points_; }
  const std::vector<PointSet>& subbasis() const { return subbasis_; }
  const std::vector<std::string>& subbasis_names() const { return names_; }

  // Least open set containing the point: the intersection of the subbasic
  // sets that contain it.
  const PointSet& neighborhood(std::size_t p) const { return nbhd_[p]; }
  PointSet full() const { return PointSet(points_).set(); }
  PointSet empty() const { return PointSet(points_); }

  bool is_open(const PointSet& s) const;
  PointSet hull(const PointSet& s) const;      // least open superset
  PointSet interior(const PointSet& s) const;  // greatest open subset
  bool is_t0() const;

  // Every open set, sorted; throws LimitExceeded past the limit.
  std::vector<PointSet> opens(std::size_t limit = 100000) const;

 private:
  std::size_t points_ = 0;
  std::vector<std::string> names_;
  std::vector<PointSet> subbasis_;
  std::vector<PointSet> nbhd_;
};

// Preimage of every subbasic set of Y is open in X.
bool is_continuous(const FinSpace& X, const FinSpace& Y, const std::vector<int>& f);
// Image of every open of X is open in Y.
bool is_open_map(const FinSpace& X, const FinSpace& Y, const std::vector<int>& f);
PointSet preimage(const std::vector<int>& f, const PointSet& s);
PointSet image(const std::vector<int>& f, const PointSet& s, std::size_t target_size);

// A completely prime filter of a finite space is principal; it is stored by
// its least member.
struct CPFilter {
  PointSet least;

  bool contains(const FinSpace& X, const PointSet& open) const {
    return X.is_open(open) && subset_of(least, open);
  }
  bool operator==(const CPFilter&) const = default;
};

std::vector<CPFilter> cp_filters(const FinSpace& X);
CPFilter neighborhood_filter(const FinSpace& X, std::size_t p);

}  // namespace geodual
