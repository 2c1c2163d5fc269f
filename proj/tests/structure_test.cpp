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
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "mmsfair/constructions.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/structure.hpp"
#include "oracles.hpp"

namespace mmsfair {
namespace {

// Applies an item permutation and an agent permutation: new item j is old
// item item_perm[j], new agent i is old agent agent_perm[i].
Instance Permute(const Instance& inst, const std::vector<int>& item_perm,
                 const std::vector<int>& agent_perm) {
  std::vector<std::vector<ExactNumber>> v(inst.agents());
  for (int i = 0; i < inst.agents(); ++i) {
    for (int j : item_perm) v[i].push_back(inst.value(agent_perm[i], j));
  }
  return Instance(inst.mode(), std::move(v));
}

TEST_CASE("classify_bundle on the 3x9 goods instance") {
  const Instance t = theorem1_instance();
  CHECK(classify_bundle(t, 1, Bundle{6, 7, 8}) == BundleClass::kGood);
  CHECK(bundle_value(t, 1, Bundle{6, 7, 8}) == 42);
  CHECK(classify_bundle(t, 0, Bundle{0, 3, 6}) == BundleClass::kBad);
  CHECK(bundle_value(t, 0, Bundle{0, 3, 6}) == 39);
  for (int a = 0; a < 3; ++a) {
    const auto cert = mms(t, a);
    for (const auto& b : cert.partition.bundles()) {
      CHECK(classify_bundle(t, a, b) == BundleClass::kGood);
    }
  }
}

TEST_CASE("the 3x9 goods instance has the parallel diagonals structure") {
  const Instance t = theorem1_instance();
  const StructureClass s = detect_structure(t);
  REQUIRE(s.kind == StructureKind::kParallelDiagonals);
  CHECK(s.role_assignment == std::array<int, 3>{0, 1, 2});
  std::array<int, 9> identity;
  std::iota(identity.begin(), identity.end(), 0);
  CHECK(s.item_relabeling == identity);
  CHECK(s.mms_partitions[2][1] == Bundle{2, 4, 6});
  CHECK(s.mms_partitions[2][0] == Bundle{1, 3});
  CHECK(s.mms == std::vector<ExactNumber>{40, 40, 40});

  // Rows R1..R3, C1..C3, P, D, Q.
  const auto pattern = good_pattern(t, s);
  const std::array<std::array<bool, 9>, 3> expected = {{
      {true, true, true, false, false, true, true, false, false},
      {false, false, true, true, true, true, true, false, false},
      {false, false, true, false, false, true, true, true, true},
  }};
  CHECK(pattern == expected);

  // Exactly three bundles of the three partitions are good for everyone.
  std::vector<Bundle> shared;
  for (const auto& part : s.mms_partitions) {
    for (const auto& b : part) {
      bool all = true;
      for (int a = 0; a < 3; ++a) {
        all &= classify_bundle(t, a, b) == BundleClass::kGood;
      }
      if (all) shared.push_back(b);
    }
  }
  std::sort(shared.begin(), shared.end());
  CHECK(shared == std::vector<Bundle>{Bundle{1, 3}, Bundle{2, 5, 8},
                                      Bundle{6, 7, 8}});
}

TEST_CASE("structure detection survives renaming items and agents") {
  const Instance t = theorem1_instance();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<int> items(9), agents = {0, 1, 2};
    std::iota(items.begin(), items.end(), 0);
    std::shuffle(items.begin(), items.end(), rng);
    std::shuffle(agents.begin(), agents.end(), rng);
    const Instance p = Permute(t, items, agents);
    const StructureClass s = detect_structure(p);
    REQUIRE(s.kind == StructureKind::kParallelDiagonals);
    // The canonical grid read back through the relabeling is a valid
    // structure: each role's partition is good for that role.
    for (int role = 0; role < 3; ++role) {
      for (const auto& b : s.mms_partitions[role]) {
        CHECK(classify_bundle(p, s.role_assignment[role], b) ==
              BundleClass::kGood);
      }
    }
    CHECK(check_max_gap_necessary_conditions(p, 40, s).all_hold());
  }
}

TEST_CASE("instances with a positive gap are structured") {
  // Scaled and renamed copies, plus small perturbations that keep the gap.
  const Instance t = theorem1_instance();
  std::mt19937_64 rng(11);
  int positive = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<ExactNumber>> v = t.values();
    const ExactNumber scale(static_cast<std::int64_t>(2 + rng() % 5));
    for (auto& row : v) {
      for (auto& x : row) x = x * scale;
    }
    const int a = static_cast<int>(rng() % 3), j = static_cast<int>(rng() % 9);
    v[a][j] += ExactNumber(1) / ExactNumber(3);
    const Instance inst(Mode::kGoods, v);
    if (gap(inst).gap.sign() <= 0) continue;
    ++positive;
    CHECK(detect_structure(inst).kind != StructureKind::kNone);
  }
  CHECK(positive > 0);
}

TEST_CASE("detect_structure rejects instances without the structure") {
  const Instance equal = Instance::FromIntegers(
      Mode::kGoods, std::vector<std::vector<std::int64_t>>(
                        3, std::vector<std::int64_t>(9, 1)));
  const StructureClass s = detect_structure(equal);
  CHECK(s.kind == StructureKind::kNone);
  REQUIRE(!s.exclusions.empty());
  CHECK(s.exclusions.front() == ExclusionTag::kMmsAllocationExists);
  CHECK(s.explanation.find("MmsAllocationExists") != std::string::npos);

  CHECK_THROWS_AS(detect_structure(chores_instance()), UnsupportedModeError);
  const Instance small = Instance::FromIntegers(
      Mode::kGoods, {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  CHECK_THROWS_AS(detect_structure(small), ArgumentError);
}

TEST_CASE("canonical bundles") {
  CHECK(canonical::Diagonal(StructureKind::kParallelDiagonals) ==
        std::array<int, 3>{2, 4, 6});
  CHECK(canonical::Diagonal(StructureKind::kCrossingDiagonals) ==
        std::array<int, 3>{0, 4, 8});
  CHECK(canonical::Quadruple(StructureKind::kParallelDiagonals) ==
        std::vector<int>{0, 5, 7, 8});
  CHECK(canonical::SeparationExceptions(StructureKind::kParallelDiagonals) ==
        std::vector<std::pair<int, int>>{{5, 8}, {7, 8}});
  CHECK(canonical::SeparationExceptions(StructureKind::kCrossingDiagonals) ==
        std::vector<std::pair<int, int>>{{2, 5}, {6, 7}});
}

TEST_CASE("split lemma holds for the base matrix, n = 4 and 5") {
  for (int n : {4, 5}) {
    CAPTURE(n);
    const SplitLemmaReport r = check_split_lemma(base_matrix(n));
    CHECK(r.holds);
    CHECK(!r.violation);
    CHECK(r.rows_found);
    CHECK(r.columns_found);
    CHECK(r.good_partitions >= 2);
    CHECK(r.bottom_row_split + r.right_column_split + r.mixed_bundle >=
          r.good_partitions);
  }
  SplitLemmaOptions tight;
  tight.max_n = 4;
  CHECK_THROWS_AS(check_split_lemma(base_matrix(5), tight), ArgumentError);
  tight.max_n = 6;
  tight.budget = 10;
  CHECK_THROWS_AS(check_split_lemma(base_matrix(4), tight), CapacityError);
}

TEST_CASE("good-partition count for n = 4 matches the set-partition oracle") {
  const BaseMatrixLayout layout = base_matrix(4);
  const int m = layout.items();
  std::uint64_t expected = 0;
  oracle::ForEachSetPartition(m, 4, [&](const std::vector<int>& block) {
    std::array<ExactNumber, 4> sums;
    for (int j = 0; j < m; ++j) sums[block[j]] += layout.values[j];
    for (const auto& x : sums) {
      if (x != layout.target) return;
    }
    ++expected;
  });
  CHECK(check_split_lemma(layout).good_partitions == expected);
}

TEST_CASE("split lemma detects a layout that violates it") {
  // Bottom row worth 1 per cell and two right-column cells worth 2 each, so
  // {bottom row}, {two right cells}, {last right cell}, {rest} is a good
  // partition meeting none of the conditions.
  BaseMatrixLayout layout = base_matrix(4);
  std::vector<ExactNumber> v(layout.items(), ExactNumber(0));
  for (int j : layout.row_items(3)) v[j] = 1;
  const std::vector<int> right = layout.column_items(3);
  v[right[0]] = 2;
  v[right[1]] = 2;
  v[right[2]] = 4;
  int ones = 0;
  for (int j = 0; j < layout.items() && ones < 4; ++j) {
    if (v[j] == 0 && !layout.row_items(3).empty() &&
        std::find(right.begin(), right.end(), j) == right.end()) {
      v[j] = 1;
      ++ones;
    }
  }
  layout.values = v;
  layout.target = 4;
  const SplitLemmaReport r = check_split_lemma(layout);
  CHECK(!r.holds);
  REQUIRE(r.violation);
  CHECK(static_cast<int>(r.violation->size()) == 4);
}

TEST_CASE("partition enumerator without target matches the set-partition "
          "oracle") {
  const std::vector<ExactNumber> toy = {5, 3, 3, 2, 1, 0};
  for (int k = 1; k <= 6; ++k) {
    std::uint64_t expected = 0;
    oracle::ForEachSetPartition(6, k, [&](const std::vector<int>& block) {
      if (*std::max_element(block.begin(), block.end()) == k - 1) ++expected;
    });
    const std::uint64_t got = enumerate_exact_sum_partitions(
        toy, k, std::nullopt, [](const std::vector<Bundle>&) { return true; });
    CHECK(got == expected);
  }
  // Stirling numbers of the second kind S(6, k).
  const std::vector<std::uint64_t> stirling = {1, 31, 90, 65, 15, 1};
  for (int k = 1; k <= 6; ++k) {
    CHECK(enumerate_exact_sum_partitions(
              toy, k, std::nullopt,
              [](const std::vector<Bundle>&) { return true; }) ==
          stirling[k - 1]);
  }
}

TEST_CASE("exact-sum partitions match the oracle on random values") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<ExactNumber> values;
    std::int64_t total = 0;
    for (int j = 0; j < m; ++j) {
      const std::int64_t x = static_cast<std::int64_t>(rng() % 6);
      values.emplace_back(x);
      total += x;
    }
    if (total % k != 0) values.back() += ExactNumber(k - total % k);
    total += (k - total % k) % k;
    const ExactNumber target(total / k);
    std::uint64_t expected = 0;
    oracle::ForEachSetPartition(m, k, [&](const std::vector<int>& block) {
      if (*std::max_element(block.begin(), block.end()) != k - 1) return;
      std::vector<ExactNumber> sums(k);
      for (int j = 0; j < m; ++j) sums[block[j]] += values[j];
      for (const auto& s : sums) {
        if (s != target) return;
      }
      ++expected;
    });
    std::set<std::vector<Bundle>> seen;
    const std::uint64_t got = enumerate_exact_sum_partitions(
        values, k, target, [&](const std::vector<Bundle>& p) {
          seen.insert(p);
          return true;
        });
    CHECK(got == expected);
    CHECK(seen.size() == got);
  }
}

TEST_CASE("max-gap necessary conditions at b = 40") {
  const Instance t = theorem1_instance();
  const StructureClass s = detect_structure(t);
  const MaxGapConditionsReport r = check_max_gap_necessary_conditions(t, 40, s);
  REQUIRE(r.clauses.size() == 6);
  for (const auto& c : r.clauses) {
    CAPTURE(c.number);
    CHECK(c.holds);
  }
  CHECK(r.all_hold());
  CHECK(!r.ambiguous);
  CHECK(r.order.size() == 9);
  // The order is consistent with every agent.
  for (int a = 0; a < 3; ++a) {
    for (int x = 0; x + 1 < 9; ++x) {
      CHECK(t.value(a, r.order[x]) >= t.value(a, r.order[x + 1]));
    }
  }

  // b = 41 breaks the exact-value clause.
  CHECK(!check_max_gap_necessary_conditions(t, 41, s).clauses[0].holds);
}

TEST_CASE("a value below 1 is flagged") {
  std::vector<std::vector<ExactNumber>> v = theorem1_instance().values();
  // e1 for R is worth 1; lowering it moves one half-unit elsewhere in its row.
  v[0][0] = ExactNumber(1) / ExactNumber(2);
  v[0][1] += ExactNumber(1) / ExactNumber(2);
  const Instance inst(Mode::kGoods, v);
  const StructureClass s = detect_structure(theorem1_instance());
  const MaxGapConditionsReport r =
      check_max_gap_necessary_conditions(inst, 40, s);
  CHECK(!r.clauses[3].holds);
  CHECK(!r.all_hold());
  CHECK_THROWS_AS(check_max_gap_necessary_conditions(inst, 40, StructureClass{}),
                  ArgumentError);
}

}  // namespace
}  // namespace mmsfair
