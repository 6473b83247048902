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

// Equivariant sheaves over finite topological groupoids.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geodual/groupoid.hpp"

namespace geodual {

class EquivariantSheaf {
 public:
  using Action = std::function<int(int arrow, int point)>;

  EquivariantSheaf() = default;
  // Points carry labels that are unique within a fiber. The action is only
  // queried for arrows f and points p with proj(p) == dom(f).
  EquivariantSheaf(GroupoidPtr base, FinSpace total, std::vector<int> proj,
                   std::vector<std::vector<int>> labels, const Action& act);

  const TopGroupoid& base() const { return *base_; }
  GroupoidPtr base_ptr() const { return base_; }
  const FinSpace& total() const { return total_; }
  std::size_t size() const { return proj_.size(); }
  int proj(int p) const { return proj_[p]; }
  const std::vector<int>& projection() const { return proj_; }
  const std::vector<int>& fiber(int x) const { return fibers_[x]; }
  const std::vector<int>& label(int p) const { return labels_[p]; }
  std::optional<int> find(int x, const std::vector<int>& label) const;

  // Throws PreconditionError when proj(p) != dom(f).
  int act(int f, int p) const;

 private:
  GroupoidPtr base_;
  FinSpace total_;
  std::vector<int> proj_;
  std::vector<std::vector<int>> labels_;
  std::vector<std::vector<int>> fibers_;
  std::vector<int> fiber_pos_;
  std::vector<std::vector<int>> action_;  // action_[f][k]: on fiber(dom f)[k]
};

// Local homeomorphism, action laws and action continuity.
std::vector<std::string> check_sheaf(const EquivariantSheaf& s);
bool is_local_homeomorphism(const EquivariantSheaf& s);
bool action_continuous(const EquivariantSheaf& s);

// A map of total spaces over the base commuting with the actions.
struct SheafMorphismReport {
  bool over_base = true;
  bool equivariant = true;
  bool continuous = true;
  bool injective = true;
  bool surjective = true;
  bool inverse_continuous = true;

  bool is_morphism() const { return over_base && equivariant && continuous; }
  bool is_isomorphism() const {
    return is_morphism() && injective && surjective && inverse_continuous;
  }
};

SheafMorphismReport check_sheaf_morphism(const EquivariantSheaf& from,
                                         const EquivariantSheaf& to,
                                         const std::vector<int>& map);

PointSet stabilize(const EquivariantSheaf& s, const PointSet& subset);
bool is_stable(const EquivariantSheaf& s, const PointSet& subset);
// Least open stable set containing the point.
PointSet minimal_stable_open(const EquivariantSheaf& s, int point);
// Every open stable subset of the total space, sorted.
std::vector<PointSet> stable_open_sets(const EquivariantSheaf& s,
                                       std::size_t limit = 100000);

// The sheaf <<x|phi>> of pairs (M, [a]) with [a] in the extension of phi,
// labelled by the block tuple, with the application action.
struct DefinableSheaf {
  EquivariantSheaf sheaf;
  FormulaInContext formula;
  std::shared_ptr<const ModelClass> models;
};

DefinableSheaf definable_sheaf(const ModelGroupoid& mg, const FormulaInContext& f);

// The basic open <[x,y|psi],b> of a definable sheaf.
PointSet definable_basic_open(const DefinableSheaf& d, const FormulaInContext& psi,
                              const std::vector<int>& b);
// Points (M, [a]) for a parameter tuple a: the image of the section s_a.
PointSet section_image(const DefinableSheaf& d, const std::vector<int>& a);

// Pullback along a groupoid morphism H -> G of a sheaf over G.
EquivariantSheaf pullback_sheaf(const GroupoidMorphism& m, const EquivariantSheaf& s);
// k-fold fibred power over the base; k = 0 gives the terminal sheaf.
EquivariantSheaf fiber_power(const EquivariantSheaf& s, int k);
EquivariantSheaf terminal_sheaf(GroupoidPtr base);

}  // namespace geodual
