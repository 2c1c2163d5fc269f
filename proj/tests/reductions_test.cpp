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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "mmsfair/constructions.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/reductions.hpp"
#include "oracles.hpp"

namespace mmsfair {
namespace {

std::vector<ExactNumber> Sorted(std::vector<ExactNumber> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST_CASE("ordered_version of an ordered instance is the identity") {
  const Instance inst = Instance::FromIntegers(Mode::kGoods, {{5, 4, 4, 1}, {9, 3, 2, 2}});
  const OrderedInstance o = ordered_version(inst);
  CHECK(o.instance == inst);
  for (const auto& p : o.permutation) CHECK(p == std::vector<int>{0, 1, 2, 3});
  const Allocation a({Bundle{0, 3}, Bundle{1, 2}});
  CHECK(lift_allocation(o, a) == a);
}

TEST_CASE("ordered_version preserves multisets and MMS") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, n, 1 + rng() % 10, 0, 20);
    const OrderedInstance o = ordered_version(inst);
    for (int i = 0; i < n; ++i) {
      CHECK(Sorted(o.instance.row(i)) == Sorted(inst.row(i)));
      for (int j = 1; j < inst.items(); ++j) {
        CHECK(o.instance.value(i, j - 1) >= o.instance.value(i, j));
        CHECK(o.instance.value(i, j) == inst.value(i, o.permutation[i][j]));
      }
      CHECK(mms(o.instance, i).value == mms(inst, i).value);
    }
  }
  const OrderedInstance t = ordered_version(theorem1_instance());
  CHECK(t.instance.row(0) == std::vector<ExactNumber>{26, 23, 19, 16, 12, 10, 9, 4, 1});
  CHECK(t.permutation[0] == std::vector<int>{3, 2, 7, 1, 6, 5, 8, 4, 0});
  CHECK_THROWS_AS(ordered_version(chores_instance()), UnsupportedModeError);
}

TEST_CASE("lift_allocation never lowers utility") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> owner(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, 3, 8, 0, 20);
    const OrderedInstance o = ordered_version(inst);
    std::vector<int> own(8);
    for (int& x : own) x = owner(rng);
    const Allocation ordered_alloc = Allocation::FromOwners(own, 3);
    const Allocation lifted = lift_allocation(o, ordered_alloc);
    validate_allocation(inst, lifted);
    for (int a = 0; a < 3; ++a) {
      CHECK(lifted[a].size() == ordered_alloc[a].size());
      CHECK(bundle_value(inst, a, lifted[a]) >= bundle_value(o.instance, a, ordered_alloc[a]));
    }
  }
  const OrderedInstance o = ordered_version(theorem1_instance());
  CHECK_THROWS_AS(lift_allocation(o, Allocation({Bundle{0}, Bundle{1}, Bundle{2}})),
                  ArgumentError);
}

TEST_CASE("lift_allocation breaks ties by lowest item index") {
  const Instance inst = Instance::FromIntegers(Mode::kGoods, {{1, 5, 5}, {5, 5, 1}});
  const OrderedInstance o = ordered_version(inst);
  // Agent 0 picks first: items 1 and 2 tie, item 1 wins. Agent 1 then takes
  // item 0 and agent 0 gets item 2.
  const Allocation lifted = lift_allocation(o, Allocation({Bundle{0, 2}, Bundle{1}}));
  CHECK(lifted == Allocation({Bundle{1, 2}, Bundle{0}}));
}

TEST_CASE("reduce dimensions and errors") {
  const Instance t = theorem1_instance();
  const Instance r = reduce_item_agent(t, 1, 4);
  CHECK(r.agents() == 2);
  CHECK(r.items() == 8);
  CHECK(r.row(1) == std::vector<ExactNumber>{1, 15, 23, 25, 10, 13, 20, 9});
  const Instance p = reduce_pair_agent(t, 0, 8, 1);
  CHECK(p.agents() == 2);
  CHECK(p.items() == 7);
  CHECK(p.row(0) == std::vector<ExactNumber>{1, 22, 26, 4, 9, 13, 20});
  const Instance single = Instance::FromIntegers(Mode::kGoods, {{1, 2, 3}});
  CHECK_THROWS_AS(reduce_item_agent(single, 0, 0), ArgumentError);
  CHECK_THROWS_AS(reduce_pair_agent(single, 0, 0, 1), ArgumentError);
  CHECK_THROWS_AS(reduce_pair_agent(t, 0, 2, 2), ArgumentError);
  CHECK_THROWS_AS(reduce_item_agent(t, 3, 0), ArgumentError);
  CHECK_THROWS_AS(reduce_item_agent(t, 0, 9), ArgumentError);
}

TEST_CASE("removing an item and an agent never lowers MMS") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 9);
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, n, m, 0, 20);
    const int agent = static_cast<int>(rng() % n), item = static_cast<int>(rng() % m);
    const Instance r = reduce_item_agent(inst, agent, item);
    for (int q = 0, k = 0; q < n; ++q) {
      if (q == agent) continue;
      CHECK(mms(r, k++).value >= mms(inst, q).value);
    }
  }
}

TEST_CASE("pair predicates") {
  const Instance t = theorem1_instance();
  // R's rows: e1, e2 share a bundle; e1, e4 do not.
  CHECK(pair_shares_mms_bundle(t, 0, 0, 1));
  CHECK_FALSE(pair_shares_mms_bundle(t, 0, 0, 3));
  CHECK(pair_is_small(t, 0, 0, 3));
  CHECK_FALSE(pair_is_small(t, 0, 2, 3));
  const PairDominance d = pair_dominance(t, mms(t, 2), 1, 3);
  CHECK(d.direct);
  CHECK(d.small);  // 15 + 25 == 40
}

TEST_CASE("removing a pair never lowers MMS under either hypothesis") {
  std::mt19937_64 rng(4141);
  int shared = 0, small = 0;
  for (int trial = 0; trial < 250; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 2 + static_cast<int>(rng() % 8);
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, n, m, 0, 20);
    const int agent = static_cast<int>(rng() % n);
    const int a = static_cast<int>(rng() % m);
    const int b = (a + 1 + static_cast<int>(rng() % (m - 1))) % m;
    const Instance r = reduce_pair_agent(inst, agent, a, b);
    for (int q = 0, k = 0; q < n; ++q) {
      if (q == agent) continue;
      const bool s1 = pair_shares_mms_bundle(inst, q, a, b);
      const bool s2 = pair_is_small(inst, q, a, b);
      shared += s1;
      small += s2;
      if (s1 || s2) CHECK(mms(r, k).value >= mms(inst, q).value);
      ++k;
    }
  }
  CHECK(shared > 20);
  CHECK(small > 20);
}

TEST_CASE("gluing a big item back yields an MMS allocation") {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, 3, 7, 0, 20);
    const std::vector<ExactNumber> v = mms_values(inst);
    for (int i = 0; i < 3; ++i) {
      for (int e = 0; e < 7; ++e) {
        if (inst.value(i, e) < v[i]) continue;
        const Instance r = reduce_item_agent(inst, i, e);
        const auto sub = find_mms_allocation_small(r, {{}, false});
        if (!sub) continue;
        std::vector<int> owner(7);
        for (int k = 0, j = 0; j < 7; ++j) {
          if (j == e) {
            owner[j] = i;
            continue;
          }
          const int kk = k++;
          for (int q = 0; q < 2; ++q) {
            if ((*sub)[q].contains(kk)) owner[j] = q < i ? q : q + 1;
          }
        }
        const Allocation a = Allocation::FromOwners(owner, 3);
        for (int q = 0; q < 3; ++q) CHECK(bundle_value(inst, q, a[q]) >= v[q]);
        ++checked;
      }
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("pair removal under each dominance variant preserves MMS") {
  std::mt19937_64 rng(515);
  int seen_small = 0, seen_direct = 0, seen_indirect_only = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, 3, 7, 0, 20);
    const MMSCertificate cert = mms(inst, 1);
    for (int a = 0; a < 7; ++a) {
      for (int b = a + 1; b < 7; ++b) {
        const PairDominance d = pair_dominance(inst, cert, a, b);
        if (!d.any()) continue;
        seen_small += d.small;
        seen_direct += d.direct;
        const bool indirect_only = d.indirect && !d.small && !d.direct;
        seen_indirect_only += indirect_only;
        const Instance r = reduce_pair_agent(inst, 0, a, b);
        CHECK(mms(r, 0).value >= cert.value);
      }
    }
  }
  CHECK(seen_small > 0);
  CHECK(seen_direct > 0);
  CHECK(seen_indirect_only > 0);
}

TEST_CASE("find_mms_allocation_small") {
  const Instance same = Instance::FromIntegers(Mode::kGoods, {{4, 7, 1, 8, 3}, {4, 7, 1, 8, 3}, {4, 7, 1, 8, 3}});
  CHECK(find_mms_allocation_small(same).has_value());
  CHECK_FALSE(find_mms_allocation_small(theorem1_instance()).has_value());
  CHECK_FALSE(find_mms_allocation_small(theorem1_instance(), {{}, false}).has_value());
  CHECK_FALSE(find_mms_allocation_small(chores_instance()).has_value());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = oracle::RandomInstance(rng, Mode::kGoods, 3, 8, 0, 20);
    const auto a = find_mms_allocation_small(inst);
    REQUIRE(a.has_value());
    validate_allocation(inst, *a);
    const auto v = mms_values(inst);
    for (int q = 0; q < 3; ++q) CHECK(bundle_value(inst, q, (*a)[q]) >= v[q]);
  }
}

}  // namespace
}  // namespace mmsfair
