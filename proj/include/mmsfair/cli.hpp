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


// Command-line driver. Every command except `generate` prints a RunReport.

#ifndef MMSFAIR_CLI_HPP_
#define MMSFAIR_CLI_HPP_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmsfair {

enum ExitCode : int {
  kExitOk = 0,
  kExitCounterexample = 1,
  kExitUsage = 2,
  kExitCapacity = 3,
};

struct RunReport {
  std::string command;
  // Flags as given plus an FNV-1a digest of every input file.
  nlohmann::json inputs;
  nlohmann::json result;
  // The headline numbers, each an integer string or "p/q".
  nlohmann::json exact_values;
  std::int64_t elapsed_ms = 0;

  nlohmann::json to_json() const;
  // Throws ParseError on a missing or mistyped field.
  static RunReport from_json(const nlohmann::json& doc);

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

// args excludes the program name. Output goes to `out` unless --out is set.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace mmsfair

#endif  // MMSFAIR_CLI_HPP_
