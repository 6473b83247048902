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

// Named property suites run over the models of one theory at one index set.

#pragma once

#include <string>
#include <vector>

#include "geodual/serialize.hpp"

namespace geodual {

struct SuiteConfig {
  int index_size = 2;
  int kmax = 1;
  int depth = 2;
  std::size_t limit = 10000;  // open subgroupoids and lattice sizes
  Limits limits;
};

struct SuiteResult {
  std::string name;
  Outcome outcome = Outcome::Pass;
  std::size_t checked = 0;
  std::size_t gated = 0;
  std::vector<std::string> failures;
  Json details = Json::object();
};

const std::vector<std::string>& suite_names();
// Throws PreconditionError on an unknown name.
SuiteResult run_suite(const std::string& name, TheoryPtr T, const SuiteConfig& config);

Json to_json(const SuiteResult& r);
// Pass unless some result failed; Gated when only gates remain.
Outcome combine(const std::vector<SuiteResult>& results);

// Every basic open (dom / preserve / cod) with formulas from the catalog
// at context length <= max_context, arbitrary parameters, and at most one
// preservation pair.
std::vector<BasicOpenI> basic_arrow_opens(const FormulaCatalog& catalog, int max_context);

}  // namespace geodual
