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

// Instance simplification: ordered versions, lifting allocations back from
// them, and removal of an agent together with one or two items.

#ifndef MMSFAIR_REDUCTIONS_HPP_
#define MMSFAIR_REDUCTIONS_HPP_

#include <optional>
#include <vector>

#include "mmsfair/instance.hpp"
#include "mmsfair/maximin.hpp"

namespace mmsfair {

struct OrderedInstance {
  // Every agent's values are non-increasing in the item index.
  Instance instance;
  // permutation[i][p] is the original item agent i sees at ordered position p.
  std::vector<std::vector<int>> permutation;
};

// Per-agent stable descending sort. Goods only; throws UnsupportedModeError
// for chores.
OrderedInstance ordered_version(const Instance& instance);

// Choosing sequence: ordered positions are visited in index order, and the
// agent that owns position r picks her most valuable remaining original item
// (lowest index on ties). No agent ends up worse off than in the ordered
// allocation. Throws ArgumentError for an invalid allocation.
Allocation lift_allocation(const OrderedInstance& ordered,
                           const Allocation& allocation_on_ordered);

// Instance without `agent` and `item`. Remaining agents keep their relative
// order and items are renumbered. Throws ArgumentError when n == 1 or an
// index is invalid.
Instance reduce_item_agent(const Instance& instance, int agent, int item);

// Instance without `agent`, `item_a` and `item_b`. Whether the removal keeps
// MMS values from dropping is the caller's concern; see the predicates below.
Instance reduce_pair_agent(const Instance& instance, int agent, int item_a,
                           int item_b);

// The two sufficient conditions for removing a pair, exposed separately.
// True when some optimal MMS partition of `agent` puts both items in one
// bundle.
bool pair_shares_mms_bundle(const Instance& instance, int agent, int item_a,
                            int item_b, const MmsOptions& options = {});
// True when v(item_a) + v(item_b) <= MMS of `agent`.
bool pair_is_small(const Instance& instance, int agent, int item_a,
                   int item_b, const MmsOptions& options = {});

// How a two-item bundle B relates to a fixed MMS partition of one agent.
struct PairDominance {
  bool small = false;     // v(B) <= MMS
  bool direct = false;    // B lies inside one bundle of the partition
  bool indirect = false;  // some bundle B' has v(B') >= v(B), |B' & B| == 1
  bool any() const { return small || direct || indirect; }
};
PairDominance pair_dominance(const Instance& instance,
                             const MMSCertificate& certificate, int item_a,
                             int item_b);

struct SmallSearchOptions {
  MmsOptions mms;
  // Apply single-item and pair removals before searching. The exhaustive
  // search over the original instance remains the fallback either way.
  bool use_reductions = true;
};

// An allocation giving every agent at least her MMS (goods) or at most her
// MMS (chores), or nullopt when exhaustive search shows none exists.
// Reductions are only used for goods.
std::optional<Allocation> find_mms_allocation_small(
    const Instance& instance, const SmallSearchOptions& options = {});

}  // namespace mmsfair

#endif  // MMSFAIR_REDUCTIONS_HPP_
