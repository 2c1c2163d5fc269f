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

// Core domain types: allocation instances with additive valuations over
// goods or chores, bundles, allocations and MMS certificates.

#ifndef MMSFAIR_INSTANCE_HPP_
#define MMSFAIR_INSTANCE_HPP_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmsfair/exact.hpp"

namespace mmsfair {

enum class Mode { kGoods, kChores };

std::string_view ModeName(Mode mode);

// A set of item indices. Stored sorted and duplicate-free.
class Bundle {
 public:
  Bundle() = default;
  Bundle(std::initializer_list<int> items);
  explicit Bundle(std::vector<int> items);

  static Bundle FromMask(std::uint64_t mask);
  // Throws ArgumentError when an item index is >= 64.
  std::uint64_t mask() const;

  const std::vector<int>& items() const { return items_; }
  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  bool contains(int item) const;

  friend bool operator==(const Bundle&, const Bundle&) = default;
  friend auto operator<=>(const Bundle&, const Bundle&) = default;

 private:
  std::vector<int> items_;
};

// Agent i receives bundles()[i].
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::vector<Bundle> bundles)
      : bundles_(std::move(bundles)) {}

  // Builds the allocation in which item j goes to agent owner[j].
  static Allocation FromOwners(std::span<const int> owner, int agents);

  const std::vector<Bundle>& bundles() const { return bundles_; }
  const Bundle& operator[](int agent) const { return bundles_[agent]; }
  int agents() const { return static_cast<int>(bundles_.size()); }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::vector<Bundle> bundles_;
};

// n agents x m items additive valuation matrix. For chores the entries are
// non-negative dis-utilities. Immutable once constructed.
class Instance {
 public:
  // Validates dimensions and non-negativity; throws ArgumentError.
  Instance(Mode mode, std::vector<std::vector<ExactNumber>> values);
  // Convenience for integer-valued instances.
  static Instance FromIntegers(Mode mode,
                               const std::vector<std::vector<std::int64_t>>& v);
  // An instance with n agents and no items.
  static Instance Empty(Mode mode, int agents);

  Mode mode() const { return mode_; }
  int agents() const { return agents_; }
  int items() const { return items_; }
  const ExactNumber& value(int agent, int item) const {
    return values_[agent][item];
  }
  const std::vector<ExactNumber>& row(int agent) const {
    return values_[agent];
  }
  const std::vector<std::vector<ExactNumber>>& values() const {
    return values_;
  }
  ExactNumber total(int agent) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Mode mode_;
  int agents_;
  int items_;
  std::vector<std::vector<ExactNumber>> values_;
};

// An agent's MMS value and an n-partition witnessing it.
struct MMSCertificate {
  int agent = 0;
  ExactNumber value;
  Allocation partition;
};

// Exact additive value of a bundle. Throws ArgumentError on bad indices.
ExactNumber bundle_value(const Instance& instance, int agent,
                         const Bundle& bundle);

// Throws ArgumentError unless the allocation has one bundle per agent and
// its bundles partition the item set.
void validate_allocation(const Instance& instance,
                         const Allocation& allocation);

// Instance JSON:
//   {"agents": n, "items": m, "mode": "goods"|"chores",
//    "values": [[v, ...], ...]}
// Entries are JSON integers or "p/q" strings. Throws ParseError.
Instance parse_instance(std::string_view text);

// Canonical form: sorted keys, one matrix row per line, integers bare.
std::string emit_instance(const Instance& instance);

}  // namespace mmsfair

#endif  // MMSFAIR_INSTANCE_HPP_
