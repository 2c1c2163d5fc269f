// Copyright 2026 The mmsfair Authors
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


#include "mmsfair/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "mmsfair/constructions.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/maximin.hpp"
#include "mmsfair/maxgap.hpp"
#include "mmsfair/structure.hpp"

namespace mmsfair {

using nlohmann::json;

json RunReport::to_json() const {
  return json{{"command", command},
              {"inputs", inputs},
              {"result", result},
              {"exact_values", exact_values},
              {"elapsed", elapsed_ms}};
}

RunReport RunReport::from_json(const json& doc) {
  auto need = [&](const char* key) -> const json& {
    if (!doc.is_object() || !doc.contains(key)) {
      throw ParseError(std::string("RunReport: missing field '") + key + "'");
    }
    return doc.at(key);
  };
  RunReport r;
  if (!need("command").is_string() || !need("elapsed").is_number_integer()) {
    throw ParseError("RunReport: 'command' must be a string and 'elapsed' an integer");
  }
  r.command = doc.at("command").get<std::string>();
  r.inputs = need("inputs");
  r.result = need("result");
  r.exact_values = need("exact_values");
  r.elapsed_ms = doc.at("elapsed").get<std::int64_t>();
  return r;
}

namespace {

constexpr std::array<const char*, 9> kBundleNames = {"R1", "R2", "R3", "C1", "C2",
                                                     "C3", "P",  "D",  "Q"};

// Thrown for bad flag combinations that CLI11 cannot express.
struct UsageError : Error {
  using Error::Error;
};

std::string Fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ReadInput(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

json Exact(const ExactNumber& v) { return v.to_string(); }

json ExactList(const std::vector<ExactNumber>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(Exact(x));
  return a;
}

json Items(const Bundle& b) { return b.items(); }

json Bundles(const std::vector<Bundle>& bundles) {
  json a = json::array();
  for (const auto& b : bundles) a.push_back(Items(b));
  return a;
}

json AllocationJson(const Instance& instance, const Allocation& a) {
  std::vector<ExactNumber> values;
  for (int i = 0; i < a.agents(); ++i) {
    values.push_back(bundle_value(instance, i, a.bundles()[i]));
  }
  return json{{"bundles", Bundles(a.bundles())}, {"values", ExactList(values)}};
}

std::vector<ExactNumber> ParseList(const std::string& text) {
  std::vector<ExactNumber> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    out.push_back(ExactNumber::parse(tok));
  }
  return out;
}

StructureKind ParseStructure(const std::string& name) {
  return name == "pd" ? StructureKind::kParallelDiagonals
                      : StructureKind::kCrossingDiagonals;
}

json StructureJson(const Instance& instance, const StructureClass& s,
                   const SearchOptions& options) {
  json j{{"kind", StructureKindName(s.kind)}, {"explanation", s.explanation}};
  if (s.kind == StructureKind::kNone) {
    json tags = json::array();
    for (auto t : s.exclusions) tags.push_back(ExclusionTagName(t));
    j["exclusions"] = tags;
    return j;
  }
  j["role_assignment"] = s.role_assignment;
  j["item_relabeling"] = s.item_relabeling;
  j["mms"] = ExactList(s.mms);
  json pattern = json::array();
  const auto good = good_pattern(instance, s);
  for (int role = 0; role < 3; ++role) {
    json names = json::array();
    for (int k = 0; k < 9; ++k) {
      if (good[role][k]) names.push_back(kBundleNames[k]);
    }
    pattern.push_back(json{{"agent", s.role_assignment[role]}, {"good", names}});
  }
  j["good_pattern"] = pattern;
  if (std::all_of(s.mms.begin(), s.mms.end(),
                  [&](const ExactNumber& v) { return v == s.mms[0]; })) {
    const auto c = check_max_gap_necessary_conditions(instance, s.mms[0], s, options);
    json clauses = json::array();
    for (const auto& cl : c.clauses) {
      clauses.push_back(json{{"number", cl.number},
                             {"name", cl.name},
                             {"holds", cl.holds},
                             {"details", cl.details}});
    }
    j["conditions"] = json{{"b", Exact(s.mms[0])},
                           {"all_hold", c.all_hold()},
                           {"clauses", clauses},
                           {"ambiguous", c.ambiguous},
                           {"ambiguities", c.ambiguities},
                           {"order", c.order}};
  }
  return j;
}

struct Flags {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;

  // generate
  std::string generator;
  int n = 4;
  int rows = -1, cols = -1;
  int big_n = 7;
  int agents = 3, items = 9, max_value = 20;
  std::string mode = "goods";

  // mms, gap, verify
  std::string file;
  int agent = -1;
  std::string bound;
  std::string claimed_mms;

  // search
  std::string structure;
  std::uint64_t budget = std::uint64_t{1} << 40;
  double time_limit = 0;
  std::string emit_lp, emit_mip, log;
};

class Runner {
 public:
  Runner(const Flags& f, json inputs) : f_(f), inputs_(std::move(inputs)) {
    search_.threads = f.threads;
  }

  std::string Generate(int& code) {
    Instance instance = Instance::Empty(Mode::kGoods, 1);
    const std::string& g = f_.generator;
    if (g == "theorem1") {
      instance = theorem1_instance();
    } else if (g == "chores9") {
      instance = chores_instance();
    } else if (g == "base-matrix") {
      const BaseMatrixLayout layout = base_matrix(f_.n);
      std::vector<std::vector<ExactNumber>> v(f_.n, layout.values);
      json doc = json::parse(emit_instance(Instance(Mode::kGoods, v)));
      json cells = json::array();
      for (auto [r, c] : layout.positions) cells.push_back({r, c});
      json dense = json::array();
      for (const auto& row : layout.dense(layout.values)) dense.push_back(ExactList(row));
      doc["layout"] = json{{"n", f_.n},
                           {"target", Exact(layout.target)},
                           {"positions", cells},
                           {"matrix", dense}};
      code = kExitOk;
      return doc.dump(2) + "\n";
    } else if (g == "vrvc") {
      const int rows = f_.rows >= 0 ? f_.rows : f_.n / 2;
      const int cols = f_.cols >= 0 ? f_.cols : f_.n - rows;
      instance = vr_vc_instance(f_.n, rows, cols);
    } else if (g == "extended") {
      instance = extended_instance(f_.big_n);
    } else {
      if (f_.agents < 1 || f_.items < 0 || f_.max_value < 0) {
        throw UsageError("generate random: need --agents >= 1, --items >= 0, --max >= 0");
      }
      std::mt19937_64 rng(f_.seed);
      std::uniform_int_distribution<int> dist(0, f_.max_value);
      std::vector<std::vector<std::int64_t>> v(f_.agents, std::vector<std::int64_t>(f_.items));
      for (auto& row : v) {
        for (auto& x : row) x = dist(rng);
      }
      instance = Instance::FromIntegers(f_.mode == "chores" ? Mode::kChores : Mode::kGoods, v);
    }
    code = kExitOk;
    return emit_instance(instance);
  }

  RunReport Mms(int& code) {
    RunReport r = Start("mms");
    const Instance instance = Load();
    if (f_.agent >= instance.agents()) throw UsageError("--agent out of range");
    json agents = json::array();
    std::vector<ExactNumber> values;
    for (int i = 0; i < instance.agents(); ++i) {
      if (f_.agent >= 0 && i != f_.agent) continue;
      const MMSCertificate c = mms(instance, i, search_.mms);
      values.push_back(c.value);
      agents.push_back(json{{"agent", i},
                            {"mms", Exact(c.value)},
                            {"partition", Bundles(c.partition.bundles())}});
    }
    r.result = json{{"mode", ModeName(instance.mode())}, {"agents", agents}};
    r.exact_values = json{{"mms", ExactList(values)}};
    code = kExitOk;
    return r;
  }

  RunReport Gap(int& code) {
    RunReport r = Start("gap");
    const Instance instance = Load();
    const GapReport g = gap(instance, search_);
    r.result = json{{"mode", ModeName(g.mode)},
                    {"per_agent_mms", ExactList(g.per_agent_mms)},
                    {"fraction", Exact(g.fraction)},
                    {"gap", Exact(g.gap)},
                    {"best_allocation", AllocationJson(instance, g.best_allocation)}};
    r.exact_values = json{{"per_agent_mms", ExactList(g.per_agent_mms)},
                          {"fraction", Exact(g.fraction)},
                          {"gap", Exact(g.gap)}};
    code = kExitOk;
    return r;
  }

  RunReport Verify(int& code) {
    RunReport r = Start("verify");
    const Instance instance = Load();
    const ExactNumber bound = ExactNumber::parse(f_.bound);
    std::vector<ExactNumber> claimed;
    if (f_.claimed_mms.empty()) {
      claimed = mms_values(instance, search_.mms);
    } else {
      claimed = ParseList(f_.claimed_mms);
      if (static_cast<int>(claimed.size()) != instance.agents()) {
        throw UsageError("--claimed-mms needs one value per agent");
      }
    }
    const NegativeVerdict v = verify_negative(instance, claimed, bound, search_);
    r.result = json{{"verdict", v.confirmed ? "confirmed" : "counterexample"},
                    {"bound", Exact(bound)},
                    {"mms", ExactList(claimed)}};
    if (v.counterexample) {
      r.result["counterexample"] = AllocationJson(instance, *v.counterexample);
    }
    if (instance.mode() == Mode::kGoods && instance.agents() == 3 &&
        instance.items() == 9) {
      r.result["structure"] = StructureJson(instance, detect_structure(instance, search_), search_);
    }
    r.exact_values = json{{"bound", Exact(bound)}, {"mms", ExactList(claimed)}};
    code = v.confirmed ? kExitOk : kExitCounterexample;
    return r;
  }

  RunReport Search(int& code) {
    RunReport r = Start("search");
    const StructureKind kind = ParseStructure(f_.structure);
    if (!f_.emit_lp.empty()) {
      WriteFile(f_.emit_lp, emit_lp_file(build_root_lp(kind)));
    }
    MaxGapOptions o;
    o.solve.node_limit = f_.budget;
    if (f_.time_limit > 0) {
      o.solve.time_limit = std::chrono::milliseconds(
          static_cast<std::int64_t>(f_.time_limit * 1000));
    }
    std::ofstream log;
    if (!f_.log.empty()) {
      log.open(f_.log);
      if (!log) throw UsageError("cannot write '" + f_.log + "'");
      o.solve.log = [&log](std::string_view line) { log << line << '\n'; };
    }
    const MaxGapResult g = search_max_gap(kind, o);
    if (!f_.emit_mip.empty()) WriteFile(f_.emit_mip, emit_lp_file(g.model));
    json res{{"structure", StructureKindName(kind)},
             {"status", SolveStatusName(g.status)},
             {"nodes", g.solve.node_count},
             {"lp_pivots", g.solve.lp_pivots},
             {"lazy_rounds", g.solve.lazy_rounds},
             {"lazy_rows", g.solve.lazy_rows},
             {"binaries", g.model.binary_count()},
             {"constraints", g.model.constraints().size()},
             {"notes", g.notes}};
    r.exact_values = json::object();
    if (g.solve.best_bound) {
      res["best_bound"] = Exact(*g.solve.best_bound);
      r.exact_values["best_bound"] = Exact(*g.solve.best_bound);
    }
    if (g.status == SolveStatus::kOptimal) {
      res["b"] = Exact(g.b);
      res["instance"] = json::parse(emit_instance(g.instance));
      res["verified_negative"] = g.verified_negative;
      res["conditions_hold"] = g.conditions_hold;
      res["b_integral"] = g.b_integral;
      res["values_integral"] = g.values_integral;
      res["big_m"] = json{{"order", Exact(g.order_big_m)},
                          {"allocation", Exact(g.allocation_big_m)},
                          {"certified", g.big_m_certified},
                          {"resolves", g.resolves}};
      r.exact_values["b"] = Exact(g.b);
    }
    r.result = res;
    if (g.status == SolveStatus::kBudgetExhausted) {
      code = kExitCapacity;
    } else if (g.status == SolveStatus::kOptimal && g.verified_negative) {
      code = kExitOk;
    } else {
      code = kExitCounterexample;
    }
    return r;
  }

  RunReport SplitLemma(int& code) {
    RunReport r = Start("split-lemma");
    SplitLemmaOptions o;
    const SplitLemmaReport s = check_split_lemma(base_matrix(f_.n), o);
    r.result = json{{"n", s.n},
                    {"good_partitions", s.good_partitions},
                    {"bottom_row_split", s.bottom_row_split},
                    {"right_column_split", s.right_column_split},
                    {"mixed_bundle", s.mixed_bundle},
                    {"rows_found", s.rows_found},
                    {"columns_found", s.columns_found},
                    {"holds", s.holds},
                    {"nodes", s.nodes}};
    if (s.violation) r.result["violation"] = Bundles(*s.violation);
    r.exact_values = json{{"good_partitions", std::to_string(s.good_partitions)}};
    code = s.holds ? kExitOk : kExitCounterexample;
    return r;
  }

 private:
  RunReport Start(std::string command) {
    RunReport r;
    r.command = std::move(command);
    r.inputs = inputs_;
    return r;
  }

  Instance Load() {
    const std::string text = ReadInput(f_.file);
    inputs_["files"][f_.file] = "fnv1a64:" + Fnv1a(text);
    return parse_instance(text);
  }

  static void WriteFile(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
  }

  const Flags& f_;
  json inputs_;
  SearchOptions search_;

  friend int mmsfair::run_cli(const std::vector<std::string>&, std::ostream&,
                              std::ostream&);
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  Flags f;
  CLI::App app("Exact maximin-share computations and negative examples",
               "mmsfair");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", f.seed, "Seed for randomized generators");
  app.add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::Range(1, 256));
  app.add_option("--out", f.out, "Write output here instead of stdout");

  auto* gen = app.add_subcommand("generate", "Write a named instance as JSON");
  gen->add_option("name", f.generator)
      ->required()
      ->check(CLI::IsMember({"theorem1", "chores9", "base-matrix", "vrvc",
                             "extended", "random"}));
  gen->add_option("--n", f.n, "Base-matrix size");
  gen->add_option("--rows", f.rows, "Row agents (vrvc)");
  gen->add_option("--cols", f.cols, "Column agents (vrvc)");
  gen->add_option("--N", f.big_n, "Agents (extended)");
  gen->add_option("--agents", f.agents, "Agents (random)");
  gen->add_option("--items", f.items, "Items (random)");
  gen->add_option("--max", f.max_value, "Largest value (random)");
  gen->add_option("--mode", f.mode, "goods or chores (random)")
      ->check(CLI::IsMember({"goods", "chores"}));

  auto* mms_cmd = app.add_subcommand("mms", "Maximin shares with witnesses");
  mms_cmd->add_option("file", f.file, "Instance JSON, or - for stdin")->required();
  mms_cmd->add_option("--agent", f.agent, "Only this agent")->check(CLI::NonNegativeNumber);

  auto* gap_cmd = app.add_subcommand("gap", "Best MMS fraction over all allocations");
  gap_cmd->add_option("file", f.file, "Instance JSON, or - for stdin")->required();

  auto* search = app.add_subcommand("search", "Max-gap LP/MIP search");
  search->add_option("--structure", f.structure)
      ->required()
      ->check(CLI::IsMember({"pd", "cd"}));
  search->add_option("--budget", f.budget, "Branch-and-bound node limit");
  search->add_option("--time-limit", f.time_limit, "Seconds");
  search->add_option("--emit-lp", f.emit_lp, "Write the root LP here");
  search->add_option("--emit-mip", f.emit_mip, "Write the final MIP here");
  search->add_option("--log", f.log, "Write JSON-lines solver events here");

  auto* verify = app.add_subcommand("verify", "Confirm a negative example");
  verify->add_option("file", f.file, "Instance JSON, or - for stdin")->required();
  verify->add_option("--bound", f.bound, "Every allocation must leave some agent at this or worse")
      ->required();
  verify->add_option("--claimed-mms", f.claimed_mms, "Comma-separated MMS values");

  auto* split = app.add_subcommand("split-lemma", "Check good partitions of the base matrix");
  split->add_option("--n", f.n, "Base-matrix size")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "mmsfair: " << e.what() << "\n";
    return kExitUsage;
  }

  json flags = json::object();
  flags["args"] = args;
  flags["seed"] = f.seed;
  flags["threads"] = f.threads;
  Runner runner(f, json{{"flags", flags}, {"files", json::object()}});
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  std::string text;
  try {
    if (gen->parsed()) {
      text = runner.Generate(code);
    } else {
      RunReport r;
      if (mms_cmd->parsed()) {
        r = runner.Mms(code);
      } else if (gap_cmd->parsed()) {
        r = runner.Gap(code);
      } else if (search->parsed()) {
        r = runner.Search(code);
      } else if (verify->parsed()) {
        r = runner.Verify(code);
      } else {
        r = runner.SplitLemma(code);
      }
      r.inputs = runner.inputs_;
      r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      text = r.to_json().dump(2) + "\n";
    }
  } catch (const CapacityError& e) {
    err << "mmsfair: capacity: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const CertificateError& e) {
    err << "mmsfair: certificate: " << e.what() << "\n";
    return kExitCounterexample;
  } catch (const UsageError& e) {
    err << "mmsfair: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "mmsfair: parse: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "mmsfair: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedModeError& e) {
    err << "mmsfair: " << e.what() << "\n";
    return kExitUsage;
  }
  if (f.out.empty()) {
    out << text;
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
      err << "mmsfair: cannot write '" << f.out << "'\n";
      return kExitUsage;
    }
    file << text;
  }
  return code;
}

}  // namespace mmsfair
