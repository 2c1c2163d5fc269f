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

#include "mmsfair/structure.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <sstream>

#include "mmsfair/errors.hpp"

namespace mmsfair {

BundleClass classify_bundle(const Instance& instance, int agent,
                            const Bundle& bundle, const ExactNumber& mms) {
  return bundle_value(instance, agent, bundle) >= mms ? BundleClass::kGood
                                                      : BundleClass::kBad;
}

BundleClass classify_bundle(const Instance& instance, int agent,
                            const Bundle& bundle) {
  return classify_bundle(instance, agent, bundle,
                         mms(instance, agent).value);
}

std::string_view StructureKindName(StructureKind kind) {
  switch (kind) {
    case StructureKind::kParallelDiagonals:
      return "ParallelDiagonals";
    case StructureKind::kCrossingDiagonals:
      return "CrossingDiagonals";
    case StructureKind::kNone:
      break;
  }
  return "None";
}

std::string_view ExclusionTagName(ExclusionTag tag) {
  switch (tag) {
    case ExclusionTag::kMmsAllocationExists:
      return "MmsAllocationExists";
    case ExclusionTag::kSingletonBundle:
      return "SingletonBundle";
    case ExclusionTag::kContainedBundle:
      return "ContainedBundle";
    case ExclusionTag::kNearIdenticalBundles:
      return "NearIdenticalBundles";
    case ExclusionTag::kAllTriples:
      return "AllTriples";
    case ExclusionTag::kNoUniqueSharedGood:
      return "NoUniqueSharedGood";
    case ExclusionTag::kGoodMissesBad:
      return "GoodMissesBad";
    case ExclusionTag::kPairBadForOthers:
      return "PairBadForOthers";
    case ExclusionTag::kTwoSharedPairs:
      return "TwoSharedPairs";
    case ExclusionTag::kNoStructuredPartitions:
      break;
  }
  return "NoStructuredPartitions";
}

namespace canonical {

std::array<int, 3> Diagonal(StructureKind kind) {
  if (kind == StructureKind::kParallelDiagonals) return {2, 4, 6};
  if (kind == StructureKind::kCrossingDiagonals) return {0, 4, 8};
  throw ArgumentError("canonical::Diagonal: kind None has no diagonal");
}

std::vector<int> Quadruple(StructureKind kind) {
  const auto d = Diagonal(kind);
  std::vector<int> q;
  for (int k = 0; k < 9; ++k) {
    if (k == kPair[0] || k == kPair[1]) continue;
    if (std::find(d.begin(), d.end(), k) != d.end()) continue;
    q.push_back(k);
  }
  return q;
}

std::array<std::vector<Bundle>, 3> Partitions(StructureKind kind) {
  std::array<std::vector<Bundle>, 3> out;
  for (const auto& r : kRows) out[0].push_back(Bundle{r[0], r[1], r[2]});
  for (const auto& c : kColumns) out[1].push_back(Bundle{c[0], c[1], c[2]});
  const auto d = Diagonal(kind);
  out[2].push_back(Bundle{kPair[0], kPair[1]});
  out[2].push_back(Bundle{d[0], d[1], d[2]});
  out[2].push_back(Bundle(Quadruple(kind)));
  return out;
}

std::vector<std::pair<int, int>> SeparationExceptions(StructureKind kind) {
  if (kind == StructureKind::kParallelDiagonals) return {{5, 8}, {7, 8}};
  if (kind == StructureKind::kCrossingDiagonals) return {{2, 5}, {6, 7}};
  return {};
}

}  // namespace canonical

Bundle StructureClass::original_bundle(const Bundle& canonical_bundle) const {
  std::vector<int> items;
  for (int k : canonical_bundle.items()) items.push_back(item_relabeling.at(k));
  return Bundle(std::move(items));
}

namespace {

using Mask = std::uint32_t;

// All partitions of the nine items into three triples (280 of them).
const std::vector<std::array<Mask, 3>>& TriplePartitions() {
  static const std::vector<std::array<Mask, 3>> all = [] {
    std::vector<std::array<Mask, 3>> out;
    std::vector<Mask> triples;
    for (Mask m = 0; m < 512; ++m) {
      if (std::popcount(m) == 3) triples.push_back(m);
    }
    for (Mask a : triples) {
      if (!(a & 1)) continue;
      const Mask rest = 511 & ~a;
      const Mask low = rest & (~rest + 1);
      for (Mask b : triples) {
        if ((b & a) || !(b & low)) continue;
        out.push_back({a, b, 511 & ~(a | b)});
      }
    }
    return out;
  }();
  return all;
}

struct GoodTable {
  // good[a][mask] for original agents.
  std::array<std::array<bool, 512>, 3> good{};
};

GoodTable MakeGoodTable(const Instance& instance,
                        const std::vector<ExactNumber>& mms) {
  GoodTable t;
  for (int a = 0; a < 3; ++a) {
    std::array<ExactNumber, 512> value;
    for (Mask m = 1; m < 512; ++m) {
      const int j = std::countr_zero(m);
      value[m] = value[m & (m - 1)] + instance.value(a, j);
    }
    for (Mask m = 0; m < 512; ++m) t.good[a][m] = value[m] >= mms[a];
  }
  return t;
}

Mask CanonicalMask(const std::array<int, 9>& relabel,
                   std::initializer_list<int> canon) {
  Mask m = 0;
  for (int k : canon) m |= Mask{1} << relabel[k];
  return m;
}

// Checks the full good/bad pattern for a labeled grid.
bool PatternHolds(const GoodTable& t, const std::array<int, 3>& roles,
                  const std::array<int, 9>& relabel, StructureKind kind) {
  const int R = roles[0], C = roles[1], U = roles[2];
  auto good = [&](int agent, Mask m) { return t.good[agent][m]; };
  std::array<Mask, 3> rows, cols;
  for (int r = 0; r < 3; ++r) {
    const auto& cr = canonical::kRows[r];
    const auto& cc = canonical::kColumns[r];
    rows[r] = CanonicalMask(relabel, {cr[0], cr[1], cr[2]});
    cols[r] = CanonicalMask(relabel, {cc[0], cc[1], cc[2]});
  }
  const auto d = canonical::Diagonal(kind);
  const Mask P = CanonicalMask(relabel, {canonical::kPair[0],
                                         canonical::kPair[1]});
  const Mask D = CanonicalMask(relabel, {d[0], d[1], d[2]});
  const Mask Q = 511 & ~(P | D);
  for (int k = 0; k < 3; ++k) {
    if (!good(R, rows[k]) || !good(C, cols[k])) return false;
  }
  if (!good(U, P) || !good(U, D) || !good(U, Q)) return false;
  // Shared good bundles.
  if (!good(C, rows[2]) || !good(U, rows[2])) return false;
  if (!good(R, cols[2]) || !good(U, cols[2])) return false;
  if (!good(R, P) || !good(C, P)) return false;
  // Everything else is bad for the other two.
  for (int k = 0; k < 2; ++k) {
    if (good(C, rows[k]) || good(U, rows[k])) return false;
    if (good(R, cols[k]) || good(U, cols[k])) return false;
  }
  for (Mask m : {D, Q}) {
    if (good(R, m) || good(C, m)) return false;
  }
  return true;
}

std::vector<ExclusionTag> Explain(const Instance& instance,
                                  const std::vector<MMSCertificate>& certs,
                                  const GoodTable& t) {
  std::vector<ExclusionTag> tags;
  EnumerationOptions eo;
  for (const auto& c : certs) eo.thresholds.push_back(c.value);
  if (enumerate_allocations(
          instance, [](const Allocation&) { return false; }, eo) > 0) {
    tags.push_back(ExclusionTag::kMmsAllocationExists);
  }
  // Witness partitions as masks.
  std::array<std::vector<Mask>, 3> parts;
  for (int a = 0; a < 3; ++a) {
    for (const auto& b : certs[a].partition.bundles()) {
      parts[a].push_back(static_cast<Mask>(b.mask()));
    }
  }
  auto add = [&](ExclusionTag tag) {
    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
      tags.push_back(tag);
    }
  };
  bool all_triples = true;
  int agents_with_shared_pair = 0;
  for (int a = 0; a < 3; ++a) {
    for (int j = 0; j < 9; ++j) {
      if (t.good[a][Mask{1} << j]) add(ExclusionTag::kSingletonBundle);
    }
    int shared_good = 0;
    bool shared_pair = false;
    for (Mask m : parts[a]) {
      if (std::popcount(m) != 3) all_triples = false;
      bool good_for_others = true;
      for (int o = 0; o < 3; ++o) {
        if (o == a) continue;
        if (!t.good[o][m]) {
          good_for_others = false;
          if (std::popcount(m) == 2) add(ExclusionTag::kPairBadForOthers);
        }
        for (Mask f : parts[o]) {
          if (f != m && (f & m) == f && f != 0) {
            add(ExclusionTag::kContainedBundle);
          }
          if (std::popcount(m & ~f) == 1 && std::popcount(f & ~m) == 1) {
            add(ExclusionTag::kNearIdenticalBundles);
          }
        }
      }
      if (!good_for_others) continue;
      ++shared_good;
      if (std::popcount(m) == 2) shared_pair = true;
      // A bundle good for everyone must meet every foreign bundle that is
      // bad for its owner.
      for (int o = 0; o < 3; ++o) {
        if (o == a) continue;
        for (Mask f : parts[o]) {
          if (!t.good[a][f] && (f & m) == 0) add(ExclusionTag::kGoodMissesBad);
        }
      }
    }
    if (shared_good != 1) add(ExclusionTag::kNoUniqueSharedGood);
    if (shared_pair) ++agents_with_shared_pair;
  }
  if (all_triples) add(ExclusionTag::kAllTriples);
  if (agents_with_shared_pair >= 2) add(ExclusionTag::kTwoSharedPairs);
  if (tags.empty()) tags.push_back(ExclusionTag::kNoStructuredPartitions);
  return tags;
}

}  // namespace

StructureClass detect_structure(const Instance& instance,
                                const SearchOptions& options) {
  if (instance.agents() != 3 || instance.items() != 9) {
    throw ArgumentError("detect_structure: expected 3 agents and 9 items, got " +
                        std::to_string(instance.agents()) + " and " +
                        std::to_string(instance.items()));
  }
  if (instance.mode() != Mode::kGoods) {
    throw UnsupportedModeError("detect_structure: goods instances only");
  }
  std::vector<MMSCertificate> certs;
  StructureClass out;
  for (int a = 0; a < 3; ++a) {
    certs.push_back(mms(instance, a, options.mms));
    out.mms.push_back(certs.back().value);
  }
  const GoodTable t = MakeGoodTable(instance, out.mms);
  const auto& triples = TriplePartitions();

  std::array<int, 3> roles = {0, 1, 2};
  do {
    const int R = roles[0], C = roles[1];
    for (const auto& rp : triples) {
      if (!t.good[R][rp[0]] || !t.good[R][rp[1]] || !t.good[R][rp[2]]) continue;
      for (const auto& cp : triples) {
        if (!t.good[C][cp[0]] || !t.good[C][cp[1]] || !t.good[C][cp[2]]) {
          continue;
        }
        bool orthogonal = true;
        for (Mask r : rp) {
          for (Mask c : cp) orthogonal &= std::popcount(r & c) == 1;
        }
        if (!orthogonal) continue;
        std::array<int, 3> ro = {0, 1, 2};
        do {
          std::array<int, 3> co = {0, 1, 2};
          do {
            std::array<int, 9> relabel{};
            for (int r = 0; r < 3; ++r) {
              for (int c = 0; c < 3; ++c) {
                relabel[3 * r + c] =
                    std::countr_zero(rp[ro[r]] & cp[co[c]]);
              }
            }
            for (StructureKind kind : {StructureKind::kParallelDiagonals,
                                       StructureKind::kCrossingDiagonals}) {
              if (!PatternHolds(t, roles, relabel, kind)) continue;
              out.kind = kind;
              out.item_relabeling = relabel;
              out.role_assignment = roles;
              const auto canon = canonical::Partitions(kind);
              for (int k = 0; k < 3; ++k) {
                for (const auto& b : canon[k]) {
                  out.mms_partitions[k].push_back(out.original_bundle(b));
                }
              }
              out.explanation = std::string(StructureKindName(kind));
              return out;
            }
          } while (std::next_permutation(co.begin(), co.end()));
        } while (std::next_permutation(ro.begin(), ro.end()));
      }
    }
  } while (std::next_permutation(roles.begin(), roles.end()));

  out.kind = StructureKind::kNone;
  std::iota(out.item_relabeling.begin(), out.item_relabeling.end(), 0);
  out.exclusions = Explain(instance, certs, t);
  std::ostringstream os;
  os << "no PD/CD labeling; excluded by";
  for (auto tag : out.exclusions) os << ' ' << ExclusionTagName(tag);
  out.explanation = os.str();
  return out;
}

StructureClass canonical_structure(const Instance& instance,
                                   StructureKind kind,
                                   const MmsOptions& options) {
  if (kind == StructureKind::kNone) {
    throw ArgumentError("canonical_structure: kind None");
  }
  if (instance.agents() != 3 || instance.items() != 9) {
    throw ArgumentError("canonical_structure: expected 3 agents and 9 items");
  }
  StructureClass s;
  s.kind = kind;
  std::iota(s.item_relabeling.begin(), s.item_relabeling.end(), 0);
  s.role_assignment = {0, 1, 2};
  s.mms_partitions = canonical::Partitions(kind);
  s.mms = mms_values(instance, options);
  s.explanation = std::string(StructureKindName(kind));
  return s;
}

std::array<std::array<bool, 9>, 3> good_pattern(const Instance& instance,
                                                const StructureClass& s) {
  if (s.kind == StructureKind::kNone) {
    throw ArgumentError("good_pattern: instance has no PD/CD structure");
  }
  const auto canon = canonical::Partitions(s.kind);
  std::array<std::array<bool, 9>, 3> out{};
  for (int role = 0; role < 3; ++role) {
    const int agent = s.role_assignment[role];
    int k = 0;
    for (const auto& part : canon) {
      for (const auto& b : part) {
        out[role][k++] = classify_bundle(instance, agent, s.original_bundle(b),
                                         s.mms[agent]) == BundleClass::kGood;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class PartitionEnumerator {
 public:
  PartitionEnumerator(const std::vector<ExactNumber>& values, int parts,
                      const std::optional<ExactNumber>& target,
                      std::uint64_t budget)
      : parts_(parts), budget_(budget) {
    const int m = static_cast<int>(values.size());
    if (parts < 1) throw ArgumentError("partition enumeration: parts < 1");
    for (const auto& v : values) {
      auto x = v.to_int64();
      if (!v.is_integer() || !x || *x < 0 || *x > (std::int64_t{1} << 40)) {
        throw ArgumentError(
            "partition enumeration: values must be non-negative integers");
      }
      value_.push_back(*x);
    }
    order_.resize(m);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return value_[a] > value_[b]; });
    if (target) {
      auto t = target->to_int64();
      if (!target->is_integer() || !t || *t < 0) {
        throw ArgumentError("partition enumeration: bad target");
      }
      if (*t > (std::int64_t{1} << 26)) {
        throw CapacityError("partition enumeration: target too large");
      }
      target_ = *t;
      // reach_[i][s]: some subset of order_[i..] sums to s.
      reach_.assign(m + 1, std::vector<char>(*t + 1, 0));
      reach_[m][0] = 1;
      for (int i = m - 1; i >= 0; --i) {
        const std::int64_t v = value_[order_[i]];
        for (std::int64_t s = 0; s <= *t; ++s) {
          reach_[i][s] = reach_[i + 1][s] || (s >= v && reach_[i + 1][s - v]);
        }
      }
    }
    sum_.assign(parts, 0);
    members_.assign(parts, {});
  }

  std::uint64_t Run(
      const std::function<bool(const std::vector<Bundle>&)>& visit) {
    visit_ = &visit;
    count_ = 0;
    stopped_ = false;
    Place(0, 0);
    return count_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  bool Feasible(int next, int open) const {
    const int m = static_cast<int>(order_.size());
    if (m - next < parts_ - open) return false;
    if (target_ < 0) return true;
    for (int b = 0; b < open; ++b) {
      if (!reach_[next][target_ - sum_[b]]) return false;
    }
    return true;
  }

  void Place(int next, int open) {
    if (stopped_) return;
    if (++nodes_ > budget_) {
      throw CapacityError("partition enumeration: node budget exhausted");
    }
    const int m = static_cast<int>(order_.size());
    if (next == m) {
      if (open != parts_) return;
      if (target_ >= 0) {
        for (int b = 0; b < parts_; ++b) {
          if (sum_[b] != target_) return;
        }
      }
      ++count_;
      std::vector<Bundle> bundles;
      for (const auto& mem : members_) bundles.emplace_back(mem);
      std::sort(bundles.begin(), bundles.end());
      if (!(*visit_)(bundles)) stopped_ = true;
      return;
    }
    const int item = order_[next];
    const std::int64_t v = value_[item];
    const int limit = std::min(open + 1, parts_);
    for (int b = 0; b < limit && !stopped_; ++b) {
      if (target_ >= 0 && sum_[b] + v > target_) continue;
      sum_[b] += v;
      members_[b].push_back(item);
      const int now_open = b == open ? open + 1 : open;
      if (Feasible(next + 1, now_open)) Place(next + 1, now_open);
      members_[b].pop_back();
      sum_[b] -= v;
    }
  }

  int parts_;
  std::uint64_t budget_;
  std::vector<std::int64_t> value_;
  std::vector<int> order_;
  std::int64_t target_ = -1;
  std::vector<std::vector<char>> reach_;
  std::vector<std::int64_t> sum_;
  std::vector<std::vector<int>> members_;
  const std::function<bool(const std::vector<Bundle>&)>* visit_ = nullptr;
  std::uint64_t count_ = 0;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
};

}  // namespace

std::uint64_t enumerate_exact_sum_partitions(
    const std::vector<ExactNumber>& values, int parts,
    const std::optional<ExactNumber>& target,
    const std::function<bool(const std::vector<Bundle>&)>& visit,
    std::uint64_t budget) {
  PartitionEnumerator e(values, parts, target, budget);
  return e.Run(visit);
}

SplitLemmaReport check_split_lemma(const BaseMatrixLayout& layout,
                                   const SplitLemmaOptions& options) {
  const int n = layout.n;
  if (n < 4) throw ArgumentError("check_split_lemma: n < 4");
  if (n > options.max_n) {
    throw ArgumentError("check_split_lemma: n = " + std::to_string(n) +
                        " exceeds max_n = " + std::to_string(options.max_n));
  }
  const int m = layout.items();
  std::vector<char> bottom(m, 0), right(m, 0);
  for (int j : layout.row_items(n - 1)) bottom[j] = 1;
  for (int j : layout.column_items(n - 1)) right[j] = 1;
  const int corner = layout.item_at(n - 1, n - 1);

  std::vector<Bundle> rows, cols;
  for (int r = 0; r < n; ++r) rows.emplace_back(layout.row_items(r));
  for (int c = 0; c < n; ++c) cols.emplace_back(layout.column_items(c));
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());

  SplitLemmaReport report;
  report.n = n;
  PartitionEnumerator e(layout.values, n, layout.target, options.budget);
  report.good_partitions = e.Run([&](const std::vector<Bundle>& p) {
    bool bottom_split = true, right_split = true, mixed = false;
    for (const auto& b : p) {
      int nb = 0, nr = 0;
      for (int j : b.items()) {
        nb += bottom[j];
        nr += right[j];
      }
      bottom_split &= nb == 1;
      right_split &= nr == 1;
      if (nb > 0 && nr > 0 && !b.contains(corner)) mixed = true;
    }
    report.bottom_row_split += bottom_split;
    report.right_column_split += right_split;
    report.mixed_bundle += mixed;
    if (p == rows) report.rows_found = true;
    if (p == cols) report.columns_found = true;
    if (!bottom_split && !right_split && !mixed && !report.violation) {
      report.holds = false;
      report.violation = p;
    }
    return true;
  });
  report.nodes = e.nodes();
  return report;
}

// ---------------------------------------------------------------------------

bool MaxGapConditionsReport::all_hold() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const ClauseResult& c) { return c.holds; });
}

namespace {

std::string ItemName(int canonical_item) {
  return "e" + std::to_string(canonical_item + 1);
}

const char* RoleName(int role) {
  static const char* kNames[] = {"R", "C", "U"};
  return kNames[role];
}

ClauseResult& AddClause(MaxGapConditionsReport& report, int number,
                        const char* name) {
  auto& c = report.clauses.emplace_back();
  c.number = number;
  c.name = name;
  return c;
}

}  // namespace

MaxGapConditionsReport check_max_gap_necessary_conditions(
    const Instance& instance, const ExactNumber& b,
    const StructureClass& structure, const SearchOptions& options) {
  if (structure.kind == StructureKind::kNone) {
    throw ArgumentError(
        "check_max_gap_necessary_conditions: structure kind is None");
  }
  if (instance.agents() != 3 || instance.items() != 9 ||
      instance.mode() != Mode::kGoods) {
    throw ArgumentError(
        "check_max_gap_necessary_conditions: expected a 3x9 goods instance");
  }
  const auto& s = structure;
  auto v = [&](int role, int canon_item) -> const ExactNumber& {
    return instance.value(s.role_assignment[role], s.original_item(canon_item));
  };
  const auto canon = canonical::Partitions(s.kind);
  const std::vector<ExactNumber> mms_vec = mms_values(instance, options.mms);
  const ExactNumber b1 = b - ExactNumber(1);

  MaxGapConditionsReport report;
  report.clauses.reserve(6);
  auto& c1 = AddClause(report, 1, "mms_bundles_equal_b");
  for (int role = 0; role < 3; ++role) {
    const int agent = s.role_assignment[role];
    if (mms_vec[agent] != b) {
      c1.holds = false;
      c1.details.push_back(std::string("MMS of ") + RoleName(role) + " is " +
                           mms_vec[agent].to_string());
    }
    for (const auto& bundle : canon[role]) {
      const ExactNumber val =
          bundle_value(instance, agent, s.original_bundle(bundle));
      if (val != b) {
        c1.holds = false;
        c1.details.push_back(std::string(RoleName(role)) + " values a bundle at " +
                             val.to_string());
      }
    }
  }

  auto& c2 =
      AddClause(report, 2, "every_allocation_below_b");
  const NegativeVerdict verdict =
      verify_negative(instance, mms_vec, b1, options);
  if (!verdict.confirmed) {
    c2.holds = false;
    c2.details.push_back("some allocation gives every agent more than b-1");
    report.counterexample = verdict.counterexample;
  }

  auto& c3 = AddClause(report, 3, "bad_bundles_at_most_b_minus_1");
  for (int role = 0; role < 3; ++role) {
    const int agent = s.role_assignment[role];
    for (int other = 0; other < 3; ++other) {
      if (other == role) continue;
      for (const auto& bundle : canon[other]) {
        const ExactNumber val =
            bundle_value(instance, agent, s.original_bundle(bundle));
        if (val < mms_vec[agent] && val > b1) {
          c3.holds = false;
          c3.details.push_back(std::string(RoleName(role)) +
                               " values a bad bundle of " + RoleName(other) +
                               " at " + val.to_string());
        }
      }
    }
  }

  auto& c4 = AddClause(report, 4, "item_values_at_least_1");
  for (int role = 0; role < 3; ++role) {
    for (int k = 0; k < 9; ++k) {
      if (v(role, k) < ExactNumber(1)) {
        c4.holds = false;
        c4.details.push_back(std::string(RoleName(role)) + "(" + ItemName(k) +
                             ") = " + v(role, k).to_string());
      }
    }
  }

  auto& c5 = AddClause(report, 5, "separation");
  const auto exceptions = canonical::SeparationExceptions(s.kind);
  for (int role = 0; role < 3; ++role) {
    std::array<int, 9> bundle_of{};
    for (int k = 0; k < 3; ++k) {
      for (int item : canon[role][k].items()) bundle_of[item] = k;
    }
    for (int x = 0; x < 9; ++x) {
      for (int y = x + 1; y < 9; ++y) {
        if (bundle_of[x] == bundle_of[y]) continue;
        if (std::find(exceptions.begin(), exceptions.end(),
                      std::pair{x, y}) != exceptions.end()) {
          continue;
        }
        const ExactNumber diff = (v(role, x) - v(role, y)).abs();
        // Partial exceptions: (e2, e8) for R and (e4, e6) for C.
        int lo = -1, hi = -1;
        if (role == 0 && x == 1 && y == 7) lo = 1, hi = 7;
        if (role == 1 && x == 3 && y == 5) lo = 3, hi = 5;
        if (lo >= 0) {
          if (v(role, hi) >= v(role, lo)) continue;
          if (diff < ExactNumber(1)) {
            report.ambiguous = true;
            report.ambiguities.push_back(
                std::string(RoleName(role)) + ": " + ItemName(x) + "," +
                ItemName(y) + " differ by " + diff.to_string() +
                " while the partial exception's inequality fails");
          }
          continue;
        }
        if (diff < ExactNumber(1)) {
          c5.holds = false;
          c5.details.push_back(std::string(RoleName(role)) + ": " +
                               ItemName(x) + "," + ItemName(y) +
                               " differ by " + diff.to_string());
        }
      }
    }
  }

  auto& c6 = AddClause(report, 6, "consistent_order");
  {
    // Edge j -> k when some agent strictly prefers j to k. A common order
    // exists iff this relation is acyclic.
    std::array<std::vector<int>, 9> succ;
    std::array<int, 9> indegree{};
    for (int j = 0; j < 9; ++j) {
      for (int k = 0; k < 9; ++k) {
        if (j == k) continue;
        for (int a = 0; a < 3; ++a) {
          if (instance.value(a, j) > instance.value(a, k)) {
            succ[j].push_back(k);
            ++indegree[k];
            break;
          }
        }
      }
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int j = 0; j < 9; ++j) {
      if (indegree[j] == 0) ready.push(j);
    }
    std::vector<int> order;
    while (!ready.empty()) {
      const int j = ready.top();
      ready.pop();
      order.push_back(j);
      for (int k : succ[j]) {
        if (--indegree[k] == 0) ready.push(k);
      }
    }
    if (order.size() == 9) {
      report.order = std::move(order);
    } else {
      c6.holds = false;
      c6.details.push_back("agents disagree on the relative order of items");
    }
  }
  return report;
}

}  // namespace mmsfair
