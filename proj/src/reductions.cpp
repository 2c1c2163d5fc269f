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

#include "mmsfair/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mmsfair/errors.hpp"

namespace mmsfair {

OrderedInstance ordered_version(const Instance& instance) {
  if (instance.mode() != Mode::kGoods) {
    throw UnsupportedModeError("ordered_version: defined for goods only");
  }
  OrderedInstance out{instance, {}};
  std::vector<std::vector<ExactNumber>> values;
  for (int i = 0; i < instance.agents(); ++i) {
    std::vector<int> perm(instance.items());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
      return instance.value(i, b) < instance.value(i, a);
    });
    std::vector<ExactNumber> row;
    row.reserve(perm.size());
    for (int j : perm) row.push_back(instance.value(i, j));
    values.push_back(std::move(row));
    out.permutation.push_back(std::move(perm));
  }
  out.instance = Instance(Mode::kGoods, std::move(values));
  return out;
}

Allocation lift_allocation(const OrderedInstance& ordered,
                           const Allocation& allocation_on_ordered) {
  const Instance& inst = ordered.instance;
  validate_allocation(inst, allocation_on_ordered);
  const int m = inst.items();
  std::vector<int> chooser(m);
  for (int a = 0; a < inst.agents(); ++a) {
    for (int p : allocation_on_ordered[a].items()) chooser[p] = a;
  }
  // Agent a's r-th choice in her own preference order is permutation[a][r];
  // walking her list from the front and skipping taken items yields her
  // most valuable remaining item, lowest index on ties.
  std::vector<char> taken(m, 0);
  std::vector<int> cursor(inst.agents(), 0);
  std::vector<std::vector<int>> bundles(inst.agents());
  for (int r = 0; r < m; ++r) {
    const int a = chooser[r];
    const std::vector<int>& pref = ordered.permutation[a];
    while (taken[pref[cursor[a]]]) ++cursor[a];
    const int item = pref[cursor[a]];
    taken[item] = 1;
    bundles[a].push_back(item);
  }
  std::vector<Bundle> out;
  for (auto& b : bundles) out.emplace_back(std::move(b));
  return Allocation(std::move(out));
}

namespace {

Instance RemoveAgentAndItems(const Instance& instance, int agent,
                             const std::vector<int>& items) {
  if (instance.agents() == 1) {
    throw ArgumentError("reduction needs at least two agents");
  }
  if (agent < 0 || agent >= instance.agents()) {
    throw ArgumentError("reduction: agent " + std::to_string(agent) +
                        " out of range");
  }
  for (int j : items) {
    if (j < 0 || j >= instance.items()) {
      throw ArgumentError("reduction: item " + std::to_string(j) +
                          " out of range");
    }
  }
  std::vector<std::vector<ExactNumber>> values;
  for (int i = 0; i < instance.agents(); ++i) {
    if (i == agent) continue;
    std::vector<ExactNumber> row;
    for (int j = 0; j < instance.items(); ++j) {
      if (std::find(items.begin(), items.end(), j) == items.end()) {
        row.push_back(instance.value(i, j));
      }
    }
    values.push_back(std::move(row));
  }
  return Instance(instance.mode(), std::move(values));
}

// All rows with item_b folded into item_a.
Instance MergeItems(const Instance& instance, int item_a, int item_b) {
  std::vector<std::vector<ExactNumber>> values;
  for (int i = 0; i < instance.agents(); ++i) {
    std::vector<ExactNumber> row;
    for (int j = 0; j < instance.items(); ++j) {
      if (j == item_b) continue;
      row.push_back(j == item_a ? instance.value(i, item_a) +
                                      instance.value(i, item_b)
                                : instance.value(i, j));
    }
    values.push_back(std::move(row));
  }
  return Instance(instance.mode(), std::move(values));
}

void CheckPair(const Instance& instance, int item_a, int item_b) {
  if (item_a == item_b) throw ArgumentError("pair items must differ");
  for (int j : {item_a, item_b}) {
    if (j < 0 || j >= instance.items()) {
      throw ArgumentError("item " + std::to_string(j) + " out of range");
    }
  }
}

}  // namespace

Instance reduce_item_agent(const Instance& instance, int agent, int item) {
  return RemoveAgentAndItems(instance, agent, {item});
}

Instance reduce_pair_agent(const Instance& instance, int agent, int item_a,
                           int item_b) {
  CheckPair(instance, item_a, item_b);
  return RemoveAgentAndItems(instance, agent, {item_a, item_b});
}

bool pair_shares_mms_bundle(const Instance& instance, int agent, int item_a,
                            int item_b, const MmsOptions& options) {
  CheckPair(instance, item_a, item_b);
  return mms(MergeItems(instance, item_a, item_b), agent, options).value ==
         mms(instance, agent, options).value;
}

bool pair_is_small(const Instance& instance, int agent, int item_a,
                   int item_b, const MmsOptions& options) {
  CheckPair(instance, item_a, item_b);
  return instance.value(agent, item_a) + instance.value(agent, item_b) <=
         mms(instance, agent, options).value;
}

PairDominance pair_dominance(const Instance& instance,
                             const MMSCertificate& certificate, int item_a,
                             int item_b) {
  CheckPair(instance, item_a, item_b);
  const int j = certificate.agent;
  const ExactNumber pair_value =
      instance.value(j, item_a) + instance.value(j, item_b);
  PairDominance d;
  d.small = pair_value <= certificate.value;
  for (const Bundle& b : certificate.partition.bundles()) {
    const int hits = b.contains(item_a) + b.contains(item_b);
    if (hits == 2) d.direct = true;
    if (hits == 1 && bundle_value(instance, j, b) >= pair_value) {
      d.indirect = true;
    }
  }
  return d;
}

namespace {

bool GivesEveryoneMms(const Instance& inst, const Allocation& a,
                      const std::vector<ExactNumber>& mms) {
  for (int i = 0; i < inst.agents(); ++i) {
    const ExactNumber v = bundle_value(inst, i, a[i]);
    if (inst.mode() == Mode::kGoods ? v < mms[i] : mms[i] < v) return false;
  }
  return true;
}

std::optional<Allocation> Exhaustive(const Instance& inst,
                                     const std::vector<ExactNumber>& mms) {
  EnumerationOptions opt;
  opt.canonical_symmetry = true;
  opt.thresholds = mms;
  std::optional<Allocation> found;
  enumerate_allocations(inst, [&](const Allocation& a) {
    found = a;
    return false;
  }, opt);
  return found;
}

// Re-inserts the removed agent, holding the removed items, into a residual
// allocation.
Allocation Glue(const Allocation& residual, int agent,
                const std::vector<int>& removed, int items) {
  std::vector<int> keep;
  for (int j = 0; j < items; ++j) {
    if (std::find(removed.begin(), removed.end(), j) == removed.end()) {
      keep.push_back(j);
    }
  }
  std::vector<Bundle> bundles;
  for (int i = 0, r = 0; i <= residual.agents(); ++i) {
    if (i == agent) {
      bundles.emplace_back(removed);
      continue;
    }
    std::vector<int> mapped;
    for (int j : residual[r].items()) mapped.push_back(keep[j]);
    bundles.emplace_back(std::move(mapped));
    ++r;
  }
  return Allocation(std::move(bundles));
}

std::optional<Allocation> Solve(const Instance& inst,
                                const SmallSearchOptions& options) {
  const int n = inst.agents(), m = inst.items();
  std::vector<MMSCertificate> certs;
  std::vector<ExactNumber> values;
  for (int i = 0; i < n; ++i) {
    certs.push_back(mms(inst, i, options.mms));
    values.push_back(certs.back().value);
  }
  auto attempt = [&](int agent, const std::vector<int>& removed,
                     const Instance& residual) -> std::optional<Allocation> {
    std::optional<Allocation> sub = Solve(residual, options);
    if (!sub) return std::nullopt;
    Allocation a = Glue(*sub, agent, removed, m);
    if (GivesEveryoneMms(inst, a, values)) return a;
    return std::nullopt;
  };
  if (options.use_reductions && n > 1 && inst.mode() == Mode::kGoods) {
    // A single item worth the agent's whole share.
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < m; ++e) {
        if (inst.value(i, e) >= values[i]) {
          if (auto a = attempt(i, {e}, reduce_item_agent(inst, i, e))) return a;
          return Exhaustive(inst, values);
        }
      }
    }
    // A good pair that every other agent can spare.
    for (int q = 0; q < n; ++q) {
      for (int e = 0; e < m; ++e) {
        for (int f = e + 1; f < m; ++f) {
          if (inst.value(q, e) + inst.value(q, f) < values[q]) continue;
          bool spare = true;
          for (int j = 0; j < n && spare; ++j) {
            spare = j == q || pair_dominance(inst, certs[j], e, f).any();
          }
          if (!spare) continue;
          if (auto a = attempt(q, {e, f}, reduce_pair_agent(inst, q, e, f))) {
            return a;
          }
          return Exhaustive(inst, values);
        }
      }
    }
  }
  return Exhaustive(inst, values);
}

}  // namespace

std::optional<Allocation> find_mms_allocation_small(
    const Instance& instance, const SmallSearchOptions& options) {
  return Solve(instance, options);
}

}  // namespace mmsfair
