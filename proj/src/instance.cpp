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

#include "mmsfair/instance.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "mmsfair/errors.hpp"

namespace mmsfair {

std::string_view ModeName(Mode mode) {
  return mode == Mode::kGoods ? "goods" : "chores";
}

Bundle::Bundle(std::initializer_list<int> items)
    : Bundle(std::vector<int>(items)) {}

Bundle::Bundle(std::vector<int> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  if (!items_.empty() && items_.front() < 0) {
    throw ArgumentError("Bundle: negative item index");
  }
}

Bundle Bundle::FromMask(std::uint64_t mask) {
  std::vector<int> items;
  for (int j = 0; mask != 0; ++j, mask >>= 1) {
    if (mask & 1) items.push_back(j);
  }
  return Bundle(std::move(items));
}

std::uint64_t Bundle::mask() const {
  std::uint64_t m = 0;
  for (int j : items_) {
    if (j >= 64) throw ArgumentError("Bundle::mask: item index >= 64");
    m |= std::uint64_t{1} << j;
  }
  return m;
}

bool Bundle::contains(int item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

Allocation Allocation::FromOwners(std::span<const int> owner, int agents) {
  std::vector<std::vector<int>> items(agents);
  for (int j = 0; j < static_cast<int>(owner.size()); ++j) {
    if (owner[j] < 0 || owner[j] >= agents) {
      throw ArgumentError("Allocation::FromOwners: owner out of range");
    }
    items[owner[j]].push_back(j);
  }
  std::vector<Bundle> bundles;
  bundles.reserve(agents);
  for (auto& v : items) bundles.emplace_back(std::move(v));
  return Allocation(std::move(bundles));
}

Instance::Instance(Mode mode, std::vector<std::vector<ExactNumber>> values)
    : mode_(mode),
      agents_(static_cast<int>(values.size())),
      items_(values.empty() ? 0 : static_cast<int>(values.front().size())),
      values_(std::move(values)) {
  if (agents_ < 1) throw ArgumentError("Instance: need at least one agent");
  for (int i = 0; i < agents_; ++i) {
    if (static_cast<int>(values_[i].size()) != items_) {
      throw ArgumentError("Instance: ragged valuation matrix at agent " +
                          std::to_string(i));
    }
    for (int j = 0; j < items_; ++j) {
      if (values_[i][j].sign() < 0) {
        throw ArgumentError("Instance: negative value at agent " +
                            std::to_string(i) + ", item " + std::to_string(j));
      }
    }
  }
}

Instance Instance::FromIntegers(
    Mode mode, const std::vector<std::vector<std::int64_t>>& v) {
  std::vector<std::vector<ExactNumber>> values;
  values.reserve(v.size());
  for (const auto& row : v) values.emplace_back(row.begin(), row.end());
  return Instance(mode, std::move(values));
}

Instance Instance::Empty(Mode mode, int agents) {
  if (agents < 1) throw ArgumentError("Instance: need at least one agent");
  return Instance(mode, std::vector<std::vector<ExactNumber>>(agents));
}

ExactNumber Instance::total(int agent) const {
  ExactNumber s;
  for (const auto& v : values_.at(agent)) s += v;
  return s;
}

ExactNumber bundle_value(const Instance& instance, int agent,
                         const Bundle& bundle) {
  if (agent < 0 || agent >= instance.agents()) {
    throw ArgumentError("bundle_value: agent " + std::to_string(agent) +
                        " out of range");
  }
  ExactNumber s;
  for (int j : bundle.items()) {
    if (j >= instance.items()) {
      throw ArgumentError("bundle_value: item " + std::to_string(j) +
                          " out of range");
    }
    s += instance.value(agent, j);
  }
  return s;
}

void validate_allocation(const Instance& instance,
                         const Allocation& allocation) {
  if (allocation.agents() != instance.agents()) {
    throw ArgumentError("allocation has " +
                        std::to_string(allocation.agents()) +
                        " bundles, expected " +
                        std::to_string(instance.agents()));
  }
  std::vector<int> seen(instance.items(), 0);
  for (const auto& b : allocation.bundles()) {
    for (int j : b.items()) {
      if (j >= instance.items()) {
        throw ArgumentError("allocation: item " + std::to_string(j) +
                            " out of range");
      }
      if (seen[j]++) {
        throw ArgumentError("allocation: item " + std::to_string(j) +
                            " assigned twice");
      }
    }
  }
  for (int j = 0; j < instance.items(); ++j) {
    if (!seen[j]) {
      throw ArgumentError("allocation: item " + std::to_string(j) +
                          " unassigned");
    }
  }
}

namespace {

using nlohmann::json;

std::string LineContext(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

ExactNumber ParseEntry(const json& e, const std::string& field) {
  if (e.is_number_integer()) {
    if (e.is_number_unsigned()) {
      return ExactNumber(mpz_class(std::to_string(e.get<std::uint64_t>())));
    }
    return ExactNumber(e.get<std::int64_t>());
  }
  if (e.is_string()) {
    try {
      return ExactNumber::parse(e.get<std::string>());
    } catch (const ParseError& err) {
      throw ParseError(field + ": " + err.what());
    }
  }
  throw ParseError(field + ": expected an integer or a \"p/q\" string");
}

int ParseCount(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::int64_t>() > (1 << 20)) {
    throw ParseError(std::string("field '") + key +
                     "': expected a non-negative integer");
  }
  return static_cast<int>(v.get<std::int64_t>());
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON at " + LineContext(text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  if (!doc.contains("mode") || !doc.at("mode").is_string()) {
    throw ParseError("field 'mode': expected \"goods\" or \"chores\"");
  }
  const std::string mode_name = doc.at("mode").get<std::string>();
  Mode mode;
  if (mode_name == "goods") {
    mode = Mode::kGoods;
  } else if (mode_name == "chores") {
    mode = Mode::kChores;
  } else {
    throw ParseError("field 'mode': unknown mode '" + mode_name + "'");
  }
  const int n = ParseCount(doc, "agents");
  const int m = ParseCount(doc, "items");
  if (n < 1) throw ParseError("field 'agents': need at least one agent");
  if (!doc.contains("values") || !doc.at("values").is_array()) {
    throw ParseError("field 'values': expected an array of rows");
  }
  const json& rows = doc.at("values");
  if (static_cast<int>(rows.size()) != n) {
    throw ParseError("field 'values': expected " + std::to_string(n) +
                     " rows, found " + std::to_string(rows.size()));
  }
  std::vector<std::vector<ExactNumber>> values(n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows[i];
    const std::string row_field = "values[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != m) {
      throw ParseError(row_field + ": expected " + std::to_string(m) +
                       " entries (ragged matrix)");
    }
    values[i].reserve(m);
    for (int j = 0; j < m; ++j) {
      const std::string field = row_field + "[" + std::to_string(j) + "]";
      ExactNumber v = ParseEntry(row[j], field);
      if (v.sign() < 0) {
        throw ParseError(field + ": negative value " + v.to_string());
      }
      values[i].push_back(std::move(v));
    }
  }
  return Instance(mode, std::move(values));
}

namespace {

std::string EmitEntry(const ExactNumber& v) {
  if (v.is_integer() && v.to_int64().has_value()) return v.to_string();
  return "\"" + v.to_string() + "\"";
}

}  // namespace

std::string emit_instance(const Instance& instance) {
  std::ostringstream os;
  os << "{\n"
     << "  \"agents\": " << instance.agents() << ",\n"
     << "  \"items\": " << instance.items() << ",\n"
     << "  \"mode\": \"" << ModeName(instance.mode()) << "\",\n"
     << "  \"values\": [";
  for (int i = 0; i < instance.agents(); ++i) {
    os << (i == 0 ? "\n    [" : ",\n    [");
    for (int j = 0; j < instance.items(); ++j) {
      if (j) os << ", ";
      os << EmitEntry(instance.value(i, j));
    }
    os << "]";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

}  // namespace mmsfair
