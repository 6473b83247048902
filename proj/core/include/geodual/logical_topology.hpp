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

// The logical topologies on a model class and on its isomorphisms.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geodual/topology.hpp"

namespace geodual {

// Models M with every a_i defined in M and [a] in the extension of the
// formula.
struct BasicOpenM {
  FormulaInContext formula;
  std::vector<int> params;

  static BasicOpenM trivial() { return {{{}, Formula::top()}, {}}; }
  bool operator==(const BasicOpenM&) const = default;
  auto operator<=>(const BasicOpenM&) const = default;
};

// Domain condition, preservation pairs b -> c, codomain condition.
struct BasicOpenI {
  BasicOpenM dom = BasicOpenM::trivial();
  std::vector<std::pair<int, int>> preserve;
  BasicOpenM cod = BasicOpenM::trivial();

  bool operator==(const BasicOpenI&) const = default;
};

PointSet basic_open_points(const ModelClass& mc, const BasicOpenM& b);
PointSet basic_open_arrows(const ModelClass& mc, const BasicOpenI& v);
// The subbasic set <a |-> b> of the arrow space.
PointSet maps_to(const ModelClass& mc, int a, int b);
bool model_in(const ModelClass& mc, int model, const BasicOpenM& b);

FinSpace model_space(const ModelClass& mc);
FinSpace iso_space(const ModelClass& mc);

// The structure built from a completely prime filter on the model space by
// filter membership of the sets <[x|T],a>, <[x,y|x=y],a,b>, <R,a> and
// <f(a)=b>. Throws PreconditionError if the filter does not determine a
// model of the class.
IndexedStructure filter_to_model(const ModelClass& mc, const FinSpace& space,
                                 const CPFilter& F);

std::string to_string(const Signature& sig, const BasicOpenM& b);
std::string to_string(const Signature& sig, const BasicOpenI& v);

}  // namespace geodual
