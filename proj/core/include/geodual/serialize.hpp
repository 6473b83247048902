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

// Canonical JSON dumps. Keys are sorted and no timings are written, so equal
// inputs give byte-identical output.

#pragma once

#include <nlohmann/json.hpp>

#include "geodual/duality.hpp"

namespace geodual {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const PointSet& s);  // sorted member list
Json to_json(const Signature& sig);
Json to_json(const Theory& t);
Json to_json(const IndexedStructure& M, const Signature& sig);
Json to_json(const ModelClass& mc);
Json to_json(const FinSpace& X);
Json to_json(const TopGroupoid& g);
Json to_json(const EquivariantSheaf& s);
Json to_json(const DefinableSheaf& d);
Json to_json(const GroupoidMorphism& m);
Json to_json(const OpennessCertificate& c, const Signature& sig);
Json to_json(const DensityCertificate& c, const Signature& sig);
Json to_json(const MoerdijkSite& site);
Json to_json(const CounitReport& r);
Json to_json(const TriangleReport& r);
Json to_json(const StrongFullnessReport& r);
Json to_json(const SemReport& r);
Json to_json(const CoherentReport& r);

// Two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace geodual
