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

#include <doctest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

const std::string kDir = GEODUAL_THEORY_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = geodual::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string thy(const std::string& name) { return kDir + "/" + name + ".thy"; }

}  // namespace

TEST_CASE("models of the empty theory") {
  const auto r = run({"models", thy("empty")});
  CHECK(r.code == geodual::cli::kPass);
  CHECK(r.out.find("models: 5\n") != std::string::npos);
  CHECK(r.out.find("isomorphisms: 12\n") != std::string::npos);
}

TEST_CASE("dualize reports the counit sizes") {
  const auto r = run({"dualize", thy("empty")});
  CHECK(r.code == geodual::cli::kPass);
  CHECK(r.out.find("counit objects, length 0: 3 <-> 3") != std::string::npos);
  CHECK(r.out.find("counit objects, length 1: 2 <-> 2") != std::string::npos);
  CHECK(r.out.find("counit arrows: 16 <-> 16") != std::string::npos);
  CHECK(r.out.find("triangle identities: hold") != std::string::npos);
}

TEST_CASE("exit codes") {
  using namespace geodual::cli;
  CHECK(run({"check", "triangles", thy("symE")}).code == kPass);
  CHECK(run({"check", "--suite", "sobriety", thy("empty")}).code == kPass);
  CHECK(run({"check", "openness", thy("symE")}).code == kGated);
  CHECK(run({"models", kDir + "/missing.thy"}).code == kIoError);
  CHECK(run({"check", "no-such-suite", thy("empty")}).code == kParseError);
  CHECK(run({"models"}).code == kParseError);
  CHECK(run({"frobnicate", thy("empty")}).code == kParseError);
  CHECK(run({"models", "--index-size", "0", thy("empty")}).code == kParseError);
  CHECK(run({"sheaf", "[x] E(x, x", thy("symE")}).code == kParseError);
  CHECK(run({"models", "--max-structures", "10", thy("symE")}).code == kLimitExceeded);
  const auto fail = run({"sheaf", "[x] E(x, y)", thy("symE")});
  CHECK(fail.code != kPass);
  CHECK(!fail.err.empty());
}

TEST_CASE("json output carries the schema version") {
  const auto r = run({"models", "--format", "json", thy("inhabited")});
  REQUIRE(r.code == geodual::cli::kPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "models");
  CHECK(j["models"]["models"].size() == 10);
  CHECK(r.out.find("seconds") == std::string::npos);
}

TEST_CASE("sheaf of the generic formula") {
  const auto r = run({"sheaf", "[x] top", thy("empty")});
  CHECK(r.code == geodual::cli::kPass);
  CHECK(r.out.find("5 points") != std::string::npos);
  CHECK(r.out.find("sheaf laws: hold") != std::string::npos);
}

TEST_CASE("report is byte-identical across runs") {
  const auto a = run({"report", "--index-size", "1", thy("pointed")});
  const auto b = run({"report", "--index-size", "1", thy("pointed")});
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["schema"] == 1);
  CHECK(j.contains("suites"));
}
