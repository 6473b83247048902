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

// Command-line driver shared by the geodual executable and its tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace geodual::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kGated = 2,
  kIoError = 3,
  kParseError = 4,
  kLimitExceeded = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geodual::cli
