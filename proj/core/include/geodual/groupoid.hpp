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

// Finite topological groupoids, the groupoid of models and isomorphisms,
// and groupoid morphisms.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "geodual/logical_topology.hpp"

namespace geodual {

class TopGroupoid {
 public:
  using Compose = std::function<int(int g, int f)>;

  TopGroupoid() = default;
  // compose(g, f) is only called when cod(f) == dom(g).
  TopGroupoid(FinSpace objects, FinSpace arrows, std::vector<int> dom,
              std::vector<int> cod, std::vector<int> unit,
              std::vector<int> inverse, const Compose& compose);

  std::size_t object_count() const { return objects_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }
  const FinSpace& objects() const { return objects_; }
  const FinSpace& arrows() const { return arrows_; }

  int dom(int f) const { return dom_[f]; }
  int cod(int f) const { return cod_[f]; }
  int unit(int x) const { return unit_[x]; }
  int inverse(int f) const { return inverse_[f]; }
  // g after f, or -1 when cod(f) != dom(g).
  int compose(int g, int f) const;

  const std::vector<int>& dom_map() const { return dom_; }
  const std::vector<int>& cod_map() const { return cod_; }
  const std::vector<int>& unit_map() const { return unit_; }
  const std::vector<int>& inverse_map() const { return inverse_; }
  const std::vector<int>& arrows_from(int x) const { return out_[x]; }

 private:
  FinSpace objects_;
  FinSpace arrows_;
  std::vector<int> dom_, cod_, unit_, inverse_;
  std::vector<std::vector<int>> out_;
  std::vector<int> out_pos_;
  std::vector<std::vector<int>> comp_;  // comp_[f][k] = out_[cod f][k] after f
};

using GroupoidPtr = std::shared_ptr<const TopGroupoid>;

// Each returns the list of violated laws; empty means all hold.
std::vector<std::string> check_groupoid_axioms(const TopGroupoid& g);
std::vector<std::string> check_continuity(const TopGroupoid& g);
// Continuity of composition on the space of composable pairs, via minimal
// neighbourhoods of the fibred product.
bool composition_continuous(const TopGroupoid& g);
// Images of basic opens of the arrow space under d and c are open.
bool domain_map_open(const TopGroupoid& g);
bool codomain_map_open(const TopGroupoid& g);

struct ModelGroupoid {
  std::shared_ptr<const ModelClass> models;
  GroupoidPtr groupoid;
};

ModelGroupoid build_model_groupoid(std::shared_ptr<const ModelClass> mc);
// The groupoid of sets: models of the empty theory.
ModelGroupoid build_S_groupoid(const IndexSet& S, const Limits& limits = {});

using ArrowPairs = std::vector<std::pair<int, int>>;  // (g, f), g after f

struct PreimageReport {
  PointSet inverse_preimage, inverse_expected;
  PointSet unit_preimage, unit_expected;
  ArrowPairs compose_preimage, compose_expected;

  bool holds() const {
    return inverse_preimage == inverse_expected && unit_preimage == unit_expected &&
           compose_preimage == compose_expected;
  }
};

// Preimages of <a |-> b> under i, e and m, with the sets they should equal.
PreimageReport structure_map_preimages(const ModelGroupoid& mg, int a, int b);

struct GroupoidMorphism {
  GroupoidPtr source;
  GroupoidPtr target;
  std::vector<int> on_objects;
  std::vector<int> on_arrows;
};

std::vector<std::string> check_morphism(const GroupoidMorphism& m);

enum class Outcome { Pass, Gated, Fail };
const char* outcome_name(Outcome o);

struct OpennessCertificate {
  PointSet image;                      // d(V)
  std::vector<BasicOpenM> certificate; // basic opens whose union is claimed
  PointSet covered;                    // their union
  int witnessed = 0;  // points of the union confirmed by a star construction
  int gated = 0;      // points where the construction lacked headroom
  Outcome outcome = Outcome::Pass;
  std::string diagnosis;
};

OpennessCertificate open_image_d(const ModelGroupoid& mg, const BasicOpenI& v);

struct InterpretationMorphism {
  ModelGroupoid source;  // models of the target theory of F
  ModelGroupoid target;  // models of the source theory of F
  GroupoidMorphism morphism;
};

InterpretationMorphism mod_on_interpretation(const Interpretation& F,
                                             const IndexSet& S,
                                             const Limits& limits = {});

// Checks f0^{-1}(<[x|phi],a>) = <[x|F(phi)],a> for each listed basic open.
std::vector<std::string> check_translation_preimages(
    const Interpretation& F, const InterpretationMorphism& m,
    const std::vector<BasicOpenM>& opens);

}  // namespace geodual
