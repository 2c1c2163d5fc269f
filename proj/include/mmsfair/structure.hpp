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

// Structural analysis of 3-agent, 9-item negative examples and of good
// partitions of the base matrix.
//
// Canonical layout: the nine items sit in a 3x3 grid, e1..e9 row-major
// (canonical index k is e_{k+1}). R partitions into rows R1..R3, C into
// columns C1..C3, U into P = {e2,e4}, a main diagonal D and the remaining
// four items Q.
//   parallel diagonals: D = {e3,e5,e7}
//   crossing diagonals: D = {e1,e5,e9}

#ifndef MMSFAIR_STRUCTURE_HPP_
#define MMSFAIR_STRUCTURE_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmsfair/constructions.hpp"
#include "mmsfair/exact.hpp"
#include "mmsfair/instance.hpp"
#include "mmsfair/maximin.hpp"

namespace mmsfair {

enum class BundleClass { kGood, kBad };

// Good iff v_agent(bundle) >= MMS_agent.
BundleClass classify_bundle(const Instance& instance, int agent,
                            const Bundle& bundle);
BundleClass classify_bundle(const Instance& instance, int agent,
                            const Bundle& bundle, const ExactNumber& mms);

enum class StructureKind { kParallelDiagonals, kCrossingDiagonals, kNone };
std::string_view StructureKindName(StructureKind kind);

// Canonical bundles over canonical item indices 0..8.
namespace canonical {
inline constexpr std::array<std::array<int, 3>, 3> kRows = {
    {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
inline constexpr std::array<std::array<int, 3>, 3> kColumns = {
    {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};
inline constexpr std::array<int, 2> kPair = {1, 3};
std::array<int, 3> Diagonal(StructureKind kind);
std::vector<int> Quadruple(StructureKind kind);
// Partitions of R, C and U (in that order) for the given kind.
std::array<std::vector<Bundle>, 3> Partitions(StructureKind kind);
// Item pairs exempt from the separation property for every agent.
std::vector<std::pair<int, int>> SeparationExceptions(StructureKind kind);
}  // namespace canonical

// Reasons a candidate is excluded, named after the property that rules it
// out.
enum class ExclusionTag {
  kMmsAllocationExists,   // some allocation gives every agent her MMS
  kSingletonBundle,       // a single item is worth an agent's MMS
  kContainedBundle,       // a bundle contains another agent's bundle
  kNearIdenticalBundles,  // two bundles differ in exactly one item each way
  kAllTriples,            // every MMS bundle has three items
  kNoUniqueSharedGood,    // not exactly one bundle good for both others
  kGoodMissesBad,         // a shared good bundle misses a bad bundle
  kPairBadForOthers,      // a two-item MMS bundle is bad for another agent
  kTwoSharedPairs,        // two agents have two-item shared good bundles
  kNoStructuredPartitions,
};
std::string_view ExclusionTagName(ExclusionTag tag);

struct StructureClass {
  StructureKind kind = StructureKind::kNone;
  // item_relabeling[k] = original index of canonical item k.
  std::array<int, 9> item_relabeling{};
  // Original agent index playing R, C and U.
  std::array<int, 3> role_assignment{};
  // MMS partitions of R, C, U over original item indices.
  std::array<std::vector<Bundle>, 3> mms_partitions;
  std::vector<ExactNumber> mms;
  // Set when kind == kNone.
  std::vector<ExclusionTag> exclusions;
  std::string explanation;

  int original_item(int canonical_item) const {
    return item_relabeling[canonical_item];
  }
  Bundle original_bundle(const Bundle& canonical_bundle) const;
};

// Requires 3 agents and 9 items (ArgumentError) and goods
// (UnsupportedModeError).
StructureClass detect_structure(const Instance& instance,
                                const SearchOptions& options = {});

// The structure with identity relabeling and roles R, C, U = agents 0, 1, 2.
// Used for instances built directly in canonical layout.
StructureClass canonical_structure(const Instance& instance,
                                   StructureKind kind,
                                   const MmsOptions& options = {});

// Lists, for every agent, which of the nine canonical bundles (R1..R3,
// C1..C3, P, D, Q) are good. Row a is original agent role_assignment[a].
std::array<std::array<bool, 9>, 3> good_pattern(const Instance& instance,
                                                const StructureClass& s);

// ---------------------------------------------------------------------------
// Good partitions of the base matrix.

struct SplitLemmaOptions {
  int max_n = 6;
  // Maximum number of search nodes.
  std::uint64_t budget = std::uint64_t{1} << 34;
};

struct SplitLemmaReport {
  int n = 0;
  std::uint64_t good_partitions = 0;
  // Partitions meeting each condition (a partition may meet several).
  std::uint64_t bottom_row_split = 0;
  std::uint64_t right_column_split = 0;
  std::uint64_t mixed_bundle = 0;
  bool rows_found = false;
  bool columns_found = false;
  bool holds = true;
  // First partition meeting none of the conditions.
  std::optional<std::vector<Bundle>> violation;
  std::uint64_t nodes = 0;
};

// Enumerates every partition of the layout's items into n bundles that each
// sum to t_B and checks that each one splits the bottom row, splits the right
// column, or has a bundle meeting both without the bottom-right corner.
// Throws ArgumentError when n > max_n and CapacityError past the budget.
SplitLemmaReport check_split_lemma(const BaseMatrixLayout& layout,
                                   const SplitLemmaOptions& options = {});

// Calls visit for every partition of the items into exactly `parts` non-empty
// unlabeled bundles whose values each equal `target` (any sums when target
// is absent). Values must be non-negative integers. Returns the number of
// partitions visited; visit returning false stops the enumeration.
std::uint64_t enumerate_exact_sum_partitions(
    const std::vector<ExactNumber>& values, int parts,
    const std::optional<ExactNumber>& target,
    const std::function<bool(const std::vector<Bundle>&)>& visit,
    std::uint64_t budget = std::uint64_t{1} << 34);

// ---------------------------------------------------------------------------
// Necessary conditions on a max-gap instance.

struct ClauseResult {
  int number = 0;
  std::string name;
  bool holds = true;
  std::vector<std::string> details;
};

struct MaxGapConditionsReport {
  std::vector<ClauseResult> clauses;  // numbered 1..6
  // A pair under a partial exception whose stated inequality fails while the
  // values differ by less than one.
  bool ambiguous = false;
  std::vector<std::string> ambiguities;
  std::optional<Allocation> counterexample;
  // A common item order when clause 6 holds (original indices, first =
  // most valuable).
  std::vector<int> order;

  bool all_hold() const;
};

// Checks the six properties with the given b. Requires a classified
// structure (ArgumentError otherwise).
MaxGapConditionsReport check_max_gap_necessary_conditions(
    const Instance& instance, const ExactNumber& b,
    const StructureClass& structure, const SearchOptions& options = {});

}  // namespace mmsfair

#endif  // MMSFAIR_STRUCTURE_HPP_
