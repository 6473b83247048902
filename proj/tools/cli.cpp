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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "geodual/error.hpp"
#include "geodual/parser.hpp"
#include "geodual/suites.hpp"

namespace geodual::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string theory_path;
  std::string formula;
  std::string suite;
  std::string format = "text";
  SuiteConfig suite_config;
  double max_structures = 2e6;
};

class IoError : public Error {
 public:
  using Error::Error;
};

TheoryPtr load_theory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return std::make_shared<const Theory>(parse_theory(buf.str()));
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Pass: return kPass;
    case Outcome::Gated: return kGated;
    case Outcome::Fail: return kFail;
  }
  return kFail;
}

Json config_json(const RunConfig& c) {
  return {{"index_size", c.suite_config.index_size},
          {"kmax", c.suite_config.kmax},
          {"depth", c.suite_config.depth},
          {"limit", c.suite_config.limit},
          {"max_structures", c.max_structures}};
}

Json envelope(const RunConfig& c) {
  return {{"schema", kSchemaVersion},
          {"command", c.command},
          {"theory", c.theory_path},
          {"config", config_json(c)}};
}

void print_suite(std::ostream& out, const SuiteResult& r) {
  out << "suite " << r.name << ": " << outcome_name(r.outcome) << " (checked " << r.checked
      << ", gated " << r.gated << ")\n";
  for (const auto& f : r.failures) out << "  failure: " << f << "\n";
}

struct Session {
  RunConfig config;
  TheoryPtr theory;
  std::shared_ptr<const ModelClass> mc;
  ModelGroupoid mg;
  std::string parsing;  // what a ParseError refers to

  void load() {
    parsing = config.theory_path;
    theory = load_theory(config.theory_path);
    parsing.clear();
    Limits lim = config.suite_config.limits;
    mc = std::make_shared<const ModelClass>(
        build_model_class(theory, IndexSet(config.suite_config.index_size), lim));
    mg = build_model_groupoid(mc);
  }

  SuiteResult suite(const std::string& name) const {
    return run_suite(name, theory, config.suite_config);
  }
};

int cmd_models(Session& s, std::ostream& out) {
  const ModelClass& mc = *s.mc;
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["models"] = to_json(mc);
    out << dump(j);
    return kPass;
  }
  out << "models: " << mc.model_count() << "\n";
  out << "isomorphisms: " << mc.iso_count() << "\n";
  for (int m = 0; m < mc.model_count(); ++m) out << "  " << m << " " << mc.model(m).label() << "\n";
  return kPass;
}

int cmd_topology(Session& s, std::ostream& out) {
  const FinSpace X = model_space(*s.mc);
  const FinSpace I = iso_space(*s.mc);
  const auto opens = X.opens(s.config.suite_config.limit);
  const SuiteResult sob = s.suite("sobriety");
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["model_space"] = to_json(X);
    j["model_space"]["opens"] = opens.size();
    j["iso_space"] = to_json(I);
    j["sobriety"] = to_json(sob);
    out << dump(j);
  } else {
    out << "model space: " << X.size() << " points, " << X.subbasis().size()
        << " subbasic opens, " << opens.size() << " opens, T0 " << (X.is_t0() ? "yes" : "no")
        << "\n";
    out << "isomorphism space: " << I.size() << " points, " << I.subbasis().size()
        << " subbasic opens\n";
    print_suite(out, sob);
  }
  return exit_code(sob.outcome);
}

int cmd_groupoid(Session& s, std::ostream& out) {
  const std::vector<SuiteResult> results{s.suite("groupoid"), s.suite("preimages"),
                                         s.suite("openness")};
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["groupoid"] = to_json(*s.mg.groupoid);
    for (const auto& r : results) j["suites"].push_back(to_json(r));
    out << dump(j);
  } else {
    const TopGroupoid& G = *s.mg.groupoid;
    out << "groupoid: " << G.object_count() << " objects, " << G.arrow_count() << " arrows\n";
    out << "domain map open: " << (domain_map_open(G) ? "yes" : "no")
        << ", codomain map open: " << (codomain_map_open(G) ? "yes" : "no") << "\n";
    for (const auto& r : results) print_suite(out, r);
  }
  return exit_code(combine(results));
}

int cmd_sheaf(Session& s, std::ostream& out) {
  s.parsing = "formula";
  const FormulaInContext f = parse_formula_in_context(s.mc->signature(), s.config.formula);
  s.parsing.clear();
  const DefinableSheaf d = definable_sheaf(s.mg, f);
  const auto violations = check_sheaf(d.sheaf);
  const auto stable = stable_open_sets(d.sheaf, s.config.suite_config.limit);
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["sheaf"] = to_json(d);
    j["stable_opens"] = Json::array();
    for (const auto& o : stable) j["stable_opens"].push_back(to_json(o));
    j["violations"] = violations;
    out << dump(j);
  } else {
    out << "sheaf " << to_string(s.mc->signature(), f) << ": " << d.sheaf.size() << " points\n";
    for (std::size_t x = 0; x < s.mg.groupoid->object_count(); ++x) {
      out << "  over " << s.mc->model(static_cast<int>(x)).label() << ":";
      for (int p : d.sheaf.fiber(static_cast<int>(x))) {
        out << " (";
        const auto& l = d.sheaf.label(p);
        for (std::size_t i = 0; i < l.size(); ++i) out << (i ? "," : "") << l[i];
        out << ")";
      }
      out << "\n";
    }
    out << "stable opens: " << stable.size() << "\n";
    out << "sheaf laws: " << (violations.empty() ? "hold" : "violated") << "\n";
    for (const auto& v : violations) out << "  " << v << "\n";
  }
  return violations.empty() ? kPass : kFail;
}

int cmd_site(Session& s, std::ostream& out) {
  const SuiteResult r = s.suite("density");
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["density"] = to_json(r);
    out << dump(j);
  } else {
    out << "open subgroupoids: " << r.details.value("subgroupoids", 0) << "\n";
    out << "non-etale quotients: " << r.details.value("non_etale_sites", 0) << "\n";
    print_suite(out, r);
  }
  return exit_code(r.outcome);
}

int cmd_dualize(Session& s, std::ostream& out) {
  const SuiteResult r = s.suite("duality");
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["duality"] = to_json(r);
    out << dump(j);
  } else {
    if (r.details.contains("counit")) {
      const Json& c = r.details["counit"];
      const auto& syn = c["syntactic_objects"];
      const auto& form = c["form_objects"];
      for (std::size_t k = 0; k < syn.size(); ++k)
        out << "counit objects, length " << k << ": " << syn[k].get<int>() << " <-> "
            << form[k].get<int>() << "\n";
      out << "counit arrows: " << c["syntactic_arrows"].get<int>() << " <-> "
          << c["form_arrows"].get<int>() << "\n";
      out << "counit: " << c["outcome"].get<std::string>();
      if (!c["diagnosis"].get<std::string>().empty())
        out << " (" << c["diagnosis"].get<std::string>() << ")";
      out << "\n";
    }
    const Json& t = r.details["triangles"];
    out << "triangle identities: " << (t["holds"].get<bool>() ? "hold" : "fail") << "\n";
    print_suite(out, r);
  }
  return exit_code(r.outcome);
}

int cmd_check(Session& s, std::ostream& out) {
  std::vector<std::string> names;
  if (s.config.suite == "all")
    names = suite_names();
  else
    names = {s.config.suite};
  std::vector<SuiteResult> results;
  for (const auto& n : names) results.push_back(s.suite(n));
  if (s.config.format == "json") {
    Json j = envelope(s.config);
    j["suites"] = Json::array();
    for (const auto& r : results) j["suites"].push_back(to_json(r));
    j["outcome"] = outcome_name(combine(results));
    out << dump(j);
  } else {
    for (const auto& r : results) print_suite(out, r);
  }
  return exit_code(combine(results));
}

int cmd_report(Session& s, std::ostream& out) {
  Json j = envelope(s.config);
  j["theory_text"] = to_json(*s.theory);
  j["models"] = to_json(*s.mc);
  j["groupoid"] = to_json(*s.mg.groupoid);
  std::vector<SuiteResult> results;
  for (const auto& n : suite_names()) results.push_back(s.suite(n));
  j["suites"] = Json::array();
  for (const auto& r : results) j["suites"].push_back(to_json(r));
  j["outcome"] = outcome_name(combine(results));
  out << dump(j);
  return exit_code(combine(results));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"geodual: finite models, groupoids, sheaves and the duality checks"};
  app.require_subcommand(1);
  int index_size = 2, kmax = 1, depth = 3;
  std::size_t limit = 10000;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--index-size", index_size, "size of the index set")
        ->check(CLI::Range(1, IndexSet::kMaxSize));
    sub->add_option("--kmax", kmax, "largest context length")->check(CLI::Range(0, 4));
    sub->add_option("--depth", depth, "formula search depth")->check(CLI::Range(0, 8));
    sub->add_option("--limit", limit, "bound on open subgroupoids and lattices")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-structures", config.max_structures,
                    "bound on enumerated structures")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    common(sub);
    return sub;
  };
  add("models", "enumerate models and isomorphisms")
      ->add_option("theory", config.theory_path)->required();
  add("topology", "logical topologies and sobriety")
      ->add_option("theory", config.theory_path)->required();
  add("groupoid", "groupoid laws, continuity and openness")
      ->add_option("theory", config.theory_path)->required();
  CLI::App* sheaf = add("sheaf", "definable sheaf of a formula in context");
  sheaf->add_option("formula", config.formula, "e.g. \"[x] top\"")->required();
  sheaf->add_option("theory", config.theory_path)->required();
  add("site", "Moerdijk site objects and density certificates")
      ->add_option("theory", config.theory_path)->required();
  add("dualize", "counit, unit and triangle identities")
      ->add_option("theory", config.theory_path)->required();
  CLI::App* check = add("check", "run a named property suite");
  std::vector<std::string> check_args;
  check->add_option("args", check_args, "[SUITE] THEORY; SUITE is a suite name or 'all'")
      ->required()
      ->expected(1, 2);
  check->add_option("--suite", config.suite, "suite name or 'all'");
  add("report", "every suite as one JSON document")
      ->add_option("theory", config.theory_path)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  config.command = app.get_subcommands().front()->get_name();
  if (config.command == "check") {
    config.theory_path = check_args.back();
    if (check_args.size() == 2) {
      if (!config.suite.empty()) {
        err << "error: suite given twice\n";
        return kParseError;
      }
      config.suite = check_args.front();
    }
    if (config.suite.empty()) {
      err << "error: check needs a suite name\n";
      return kParseError;
    }
    const auto& names = suite_names();
    if (config.suite != "all" &&
        std::find(names.begin(), names.end(), config.suite) == names.end()) {
      err << "error: unknown suite '" << config.suite << "'\n";
      return kParseError;
    }
  }
  if (config.command == "report") config.format = "json";
  config.suite_config.index_size = index_size;
  config.suite_config.kmax = kmax;
  config.suite_config.depth = depth;
  config.suite_config.limit = limit;
  config.suite_config.limits.max_structures = config.max_structures;
  config.suite_config.limits.max_isomorphisms = config.max_structures;

  Session s{config, nullptr, nullptr, {}, {}};
  try {
    s.load();
    if (config.command == "models") return cmd_models(s, out);
    if (config.command == "topology") return cmd_topology(s, out);
    if (config.command == "groupoid") return cmd_groupoid(s, out);
    if (config.command == "sheaf") return cmd_sheaf(s, out);
    if (config.command == "site") return cmd_site(s, out);
    if (config.command == "dualize") return cmd_dualize(s, out);
    if (config.command == "check") return cmd_check(s, out);
    return cmd_report(s, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError& e) {
    err << "error: " << (s.parsing.empty() ? "" : s.parsing + ": ") << e.what() << "\n";
    return kParseError;
  } catch (const LimitExceeded& e) {
    err << "error: limit exceeded: " << e.what() << "\n";
    return kLimitExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
}

}  // namespace geodual::cli
