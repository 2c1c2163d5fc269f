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

// Exact maximin shares, exhaustive allocation search and gap computation.
//
// All searches run on an integer image of the instance (every value
// multiplied by the common denominator) when the sums fit in 64 bits, and on
// ExactNumber otherwise. Both paths are exact.

#ifndef MMSFAIR_MAXIMIN_HPP_
#define MMSFAIR_MAXIMIN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmsfair/exact.hpp"
#include "mmsfair/instance.hpp"

namespace mmsfair {

struct MmsOptions {
  // The subset DP keeps (n-1) tables of 2^m entries.
  int max_items = 24;
};

// MMS of one agent with the lexicographically smallest witness partition
// (bundle masks sorted ascending, compared as sequences). Goods: max over
// n-partitions of the min bundle value. Chores: min over n-partitions of the
// max bundle dis-utility. Throws CapacityError when m > max_items.
MMSCertificate mms(const Instance& instance, int agent,
                   const MmsOptions& options = {});

std::vector<ExactNumber> mms_values(const Instance& instance,
                                    const MmsOptions& options = {});

struct EnumerationOptions {
  // Maximum number of complete assignments (n^m) allowed when no pruning
  // thresholds are given.
  std::uint64_t budget = std::uint64_t{1} << 24;
  // Visit one representative per permutation of agents that share an
  // identical valuation row.
  bool canonical_symmetry = false;
  // Per-agent thresholds. Goods: a partial assignment is cut once some agent
  // can no longer reach her threshold. Chores: once some agent exceeds it.
  // Only allocations meeting every threshold are visited.
  std::vector<ExactNumber> thresholds;
};

// Return false to stop the enumeration early.
using AllocationVisitor = std::function<bool(const Allocation&)>;

// Visits complete allocations in a fixed order (items by decreasing maximum
// value, agents by index). Returns the number of visits.
std::uint64_t enumerate_allocations(const Instance& instance,
                                    const AllocationVisitor& visitor,
                                    const EnumerationOptions& options = {});

struct SearchOptions {
  int threads = 1;
  MmsOptions mms;
};

struct GapReport {
  Mode mode = Mode::kGoods;
  std::vector<ExactNumber> per_agent_mms;
  Allocation best_allocation;
  // Goods: max over allocations of min_i v_i(A_i)/MMS_i.
  // Chores: min over allocations of max_i v_i(A_i)/MMS_i.
  // Agents with MMS zero contribute the fraction 1.
  ExactNumber fraction;
  // Goods: 1 - fraction. Chores: fraction - 1.
  ExactNumber gap;
};

GapReport gap(const Instance& instance, const SearchOptions& options = {});

struct NegativeVerdict {
  bool confirmed = false;
  // Goods: an allocation in which every agent gets more than the bound.
  // Chores: every agent gets less than the bound.
  std::optional<Allocation> counterexample;
};

// Confirms that every allocation leaves some agent at value <= bound (goods)
// or dis-utility >= bound (chores). claimed_mms is recomputed and must match;
// a mismatch throws CertificateError naming the first offending agent.
NegativeVerdict verify_negative(const Instance& instance,
                                const std::vector<ExactNumber>& claimed_mms,
                                const ExactNumber& bound,
                                const SearchOptions& options = {});

// Fraction v_i(A_i)/MMS_i with the MMS-zero convention.
ExactNumber mms_fraction(const ExactNumber& value, const ExactNumber& mms);

}  // namespace mmsfair

#endif  // MMSFAIR_MAXIMIN_HPP_
