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

// Text format for theories:
//
//   rel NAME/ARITY
//   fun NAME/ARITY
//   axiom PHI |- [x, y, ...] PSI
//
// Formulas use top, bot, t = t', R(t, ...), &, \/, exists x. PHI and
// parentheses. '#' starts a comment that runs to the end of the line.

#pragma once

#include <string_view>

#include "geodual/logic.hpp"

namespace geodual {

// Throws ParseError with line and column on any error.
Theory parse_theory(std::string_view text);

// Parses "[x, y] PHI" against an existing signature.
FormulaInContext parse_formula_in_context(const Signature& sig,
                                          std::string_view text);

// Parses "PHI |- [x, y] PSI".
Sequent parse_sequent(const Signature& sig, std::string_view text);

}  // namespace geodual
