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

// Moerdijk-site objects <G,U,N>, section lifting, and the construction that
// covers site elements by definable sheaves.

#pragma once

#include <string>
#include <vector>

#include "geodual/sheaf.hpp"

namespace geodual {

// Violations of: N open, closed under inverses and composition.
std::vector<std::string> check_site_data(const TopGroupoid& g, const PointSet& N);

// The sheaf d^{-1}(U)/~N with U = d(N), codomain projection and action by
// postcomposition. Classes are ordered by least member; the total space has
// the quotient topology.
struct MoerdijkSite {
  GroupoidPtr base;
  PointSet N;
  PointSet U;
  EquivariantSheaf sheaf;
  std::vector<int> class_of_arrow;  // -1 outside d^{-1}(U)
  std::vector<int> representative;  // least arrow of each class
  // Sheaf laws failing on the quotient. When the codomain map of the base
  // is not open the quotient need not be etale.
  std::vector<std::string> violations;
};

MoerdijkSite moerdijk_sheaf(GroupoidPtr g, const PointSet& N);

// Opens V of the object space inside U with c(f) in V for f in N, d(f) in V.
std::vector<PointSet> site_stable_opens(const MoerdijkSite& site,
                                        std::size_t limit = 100000);
// Classes [f] with d(f) in V.
PointSet site_subsheaf(const MoerdijkSite& site, const PointSet& V);
// Checks that V -> site_subsheaf(V) is an order isomorphism onto the stable
// open subsets of the site sheaf.
std::vector<std::string> check_subobject_correspondence(const MoerdijkSite& site);

// Lift of a continuous section over an open U to <G,U,N_s> -> sheaf.
struct LiftedSection {
  MoerdijkSite site;
  std::vector<int> map;  // class -> point of the sheaf
  bool well_defined = true;
  bool factors = true;   // section == map after [x] -> [1_x]
  SheafMorphismReport report;
};

// section[x] is the chosen point over x for x in U and -1 elsewhere.
LiftedSection lift_section(const EquivariantSheaf& s, const PointSet& U,
                           const std::vector<int>& section);

// The section M -> (M,[a]) of a definable sheaf over <[x|phi],a>.
std::vector<int> parameter_section(const DefinableSheaf& d, const std::vector<int>& a);

// True when the star construction can move (M,[c]) to parameters a, i.e.
// some isomorphism into M sends [a] to [c].
bool point_reachable(const DefinableSheaf& d, int point, const std::vector<int>& a);

// Elements mentioned by a basic open of the arrow space, sorted.
std::vector<int> mentioned_elements(const BasicOpenI& v);
bool is_symmetric(const BasicOpenI& v);

// A neighbourhood of 1_M of the shape (<[z|chi],e> / e->e / <[z|chi],e>)
// inside v. Throws PreconditionError unless 1_M is in v.
BasicOpenI rewrite_symmetric(const ModelClass& mc, const BasicOpenI& v, int model);

// Conjunction of the atomic formulas true of [p] in M.
FormulaInContext positive_diagram(const IndexedStructure& M, const Signature& sig,
                                  const std::vector<int>& p);

struct DensityCertificate {
  Outcome outcome = Outcome::Pass;
  int element = -1;
  BasicOpenI neighborhood;       // symmetric, contains 1_{d f}, inside N
  std::vector<int> params;
  std::vector<int> lifted_map;   // class of <G,V,M> -> point of D
  std::vector<int> to_site;      // class of <G,V,M> -> class of the site
  int preimage = -1;             // point of D over the element
  int unreached = 0;             // points of D missed by the lift
  std::string diagnosis;
};

DensityCertificate density_certificate(const ModelGroupoid& mg, const MoerdijkSite& site,
                                       int element);

// Every nonempty open subgroupoid (open, inverse- and composition-closed
// arrow set), sorted. Throws LimitExceeded past the limit.
std::vector<PointSet> open_subgroupoids(const TopGroupoid& g, std::size_t limit = 10000);

// Stabilization of <[x,y|psi],a> inside <<x|phi>> against <<x|phi & exists y psi>>.
struct StabilizationReport {
  PointSet stabilized;
  PointSet expected;
  int missing = 0;        // expected points not reached
  int gated = 0;          // of those, points without star headroom
  int extra = 0;          // reached points outside the expected set
  Outcome outcome = Outcome::Pass;
};

StabilizationReport check_basic_stabilization(const DefinableSheaf& d,
                                              const FormulaInContext& psi,
                                              const std::vector<int>& a);

}  // namespace geodual
