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

#include "mmsfair/maximin.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include "integer_image.hpp"
#include "mmsfair/errors.hpp"

namespace mmsfair {
namespace {

using internal::IntegerImage;
using internal::Wide;
using internal::ZeroOf;

// ---------------------------------------------------------------------------
// Subset DP for the maximin share.
//
// f(S, 1) = v(S); f(S, k) = best over T ⊆ S of combine(v(T), f(S \ T, k-1)),
// with (best, combine) = (max, min) for goods and (min, max) for chores.
// Bundles are unordered, so T may be restricted to contain the lowest item of
// S. Empty bundles are allowed.

template <class Num>
struct DpOutcome {
  Num value;
  std::vector<std::uint32_t> masks;
};

template <class Num>
DpOutcome<Num> RunMmsDp(const std::vector<Num>& v, int parts, bool goods) {
  const int m = static_cast<int>(v.size());
  const std::uint32_t full = m == 0 ? 0u : ((std::uint32_t{1} << m) - 1);
  const std::size_t size = std::size_t{1} << m;
  const Num zero = v.empty() ? Num{} : ZeroOf(v.front());

  std::vector<Num> sum(size, zero);
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    sum[s] = sum[s & (s - 1)] + v[std::countr_zero(s)];
  }
  auto better = [goods](const Num& a, const Num& b) {
    return goods ? b < a : a < b;
  };
  auto combine = [goods](const Num& a, const Num& b) -> const Num& {
    if (goods) return b < a ? b : a;
    return a < b ? b : a;
  };

  // table[k] holds f(., k + 1); table[0] aliases `sum`.
  std::vector<std::vector<Num>> table(std::max(parts - 1, 0));
  auto level = [&](int k) -> const std::vector<Num>& {
    return k == 1 ? sum : table[k - 1];
  };
  auto best_at = [&](std::uint32_t s, int k) {
    if (s == 0) return zero;
    const std::vector<Num>& below = level(k - 1);
    const std::uint32_t low = s & (~s + 1);
    const std::uint32_t rest = s ^ low;
    Num best = combine(sum[s], below[0]);
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t t = sub | low;
      const Num& cand = combine(sum[t], below[s ^ t]);
      if (better(cand, best)) best = cand;
      if (sub == 0) break;
    }
    return best;
  };
  for (int k = 2; k <= parts - 1; ++k) {
    std::vector<Num> f(size, zero);
    for (std::uint32_t s = 1; s <= full && s != 0; ++s) f[s] = best_at(s, k);
    table[k - 1] = std::move(f);
  }

  DpOutcome<Num> out{parts == 1 ? sum[full] : best_at(full, parts), {}};
  // Greedy reconstruction: the smallest feasible mask at every level yields
  // the lexicographically smallest sorted mask sequence.
  auto feasible = [&](const Num& x) {
    return goods ? !(x < out.value) : !(out.value < x);
  };
  std::uint32_t s = full;
  for (int k = parts; k >= 2; --k) {
    const std::vector<Num>& below = level(k - 1);
    std::uint32_t t = 0;
    while (true) {
      if (feasible(sum[t]) && feasible(below[s ^ t])) break;
      t = (t - s) & s;
      if (t == 0) throw Error("mms: witness reconstruction failed");
    }
    out.masks.push_back(t);
    s ^= t;
  }
  out.masks.push_back(s);
  std::sort(out.masks.begin(), out.masks.end());
  return out;
}

// ---------------------------------------------------------------------------
// Depth-first search over item assignments.

enum class SearchKind {
  kEnumerate,     // visit allocations meeting per-agent thresholds
  kMaximizeMin,   // goods gap
  kMinimizeMax,   // chores gap
  kFindAllAbove,  // goods counterexample: every agent > bound
  kFindAllBelow,  // chores counterexample: every agent < bound
};

template <class Num>
struct Fraction {
  Num num;
  Num den;  // > 0
};

template <class Num>
bool FractionLess(const Fraction<Num>& a, const Fraction<Num>& b) {
  return Wide(a.num, b.den) < Wide(b.num, a.den);
}

template <class Num>
class AssignmentSearch {
 public:
  AssignmentSearch(SearchKind kind, const std::vector<std::vector<Num>>& values,
                   const std::vector<int>& order, std::vector<int> prev_same)
      : kind_(kind),
        n_(static_cast<int>(values.size())),
        m_(static_cast<int>(order.size())),
        order_(order),
        prev_same_(std::move(prev_same)) {
    const Num zero = ZeroOf(Num{});
    val_.assign(n_, std::vector<Num>(m_, zero));
    rem_.assign(n_, std::vector<Num>(m_ + 1, zero));
    for (int a = 0; a < n_; ++a) {
      for (int p = 0; p < m_; ++p) val_[a][p] = values[a][order_[p]];
      for (int p = m_ - 1; p >= 0; --p) rem_[a][p] = rem_[a][p + 1] + val_[a][p];
    }
    cur_.assign(n_, zero);
    count_.assign(n_, 0);
    owner_.assign(m_, -1);
  }

  void set_thresholds(std::vector<Num> t) { thresholds_ = std::move(t); }
  void set_bound(Num b) { bound_ = std::move(b); }
  void set_mms(std::vector<Num> mms) { mms_ = std::move(mms); }
  void set_visitor(std::function<bool(const std::vector<int>&)> visit) {
    visit_ = std::move(visit);
  }

  // Prefixes of length `depth` in search order that respect the symmetry
  // rule; each one roots an independent subtree.
  std::vector<std::vector<int>> Prefixes(int depth) {
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    CollectPrefixes(0, depth, prefix, out);
    return out;
  }

  // Runs the subtree under `prefix` (owners of the first positions).
  void Run(const std::vector<int>& prefix) {
    for (int p = 0; p < static_cast<int>(prefix.size()); ++p) {
      Assign(p, prefix[p]);
    }
    if (!Pruned(static_cast<int>(prefix.size()))) Dfs(static_cast<int>(prefix.size()));
    for (int p = static_cast<int>(prefix.size()) - 1; p >= 0; --p) Unassign(p);
  }

  bool found() const { return has_best_; }
  const Fraction<Num>& best() const { return best_; }
  // Owner per original item index.
  std::vector<int> best_owner() const { return ToItemOrder(best_owner_); }
  std::uint64_t visits() const { return visits_; }

 private:
  bool CanTake(int a) const {
    return count_[a] > 0 || prev_same_[a] < 0 || count_[prev_same_[a]] > 0;
  }
  void Assign(int p, int a) {
    cur_[a] += val_[a][p];
    ++count_[a];
    owner_[p] = a;
  }
  void Unassign(int p) {
    const int a = owner_[p];
    cur_[a] -= val_[a][p];
    --count_[a];
    owner_[p] = -1;
  }

  void CollectPrefixes(int p, int depth, std::vector<int>& prefix,
                       std::vector<std::vector<int>>& out) {
    if (p == depth) {
      out.push_back(prefix);
      return;
    }
    for (int a = 0; a < n_; ++a) {
      if (!CanTake(a)) continue;
      Assign(p, a);
      prefix.push_back(a);
      CollectPrefixes(p + 1, depth, prefix, out);
      prefix.pop_back();
      Unassign(p);
    }
  }

  std::vector<int> ToItemOrder(const std::vector<int>& by_pos) const {
    std::vector<int> owner(m_, -1);
    for (int p = 0; p < m_ && p < static_cast<int>(by_pos.size()); ++p) {
      owner[order_[p]] = by_pos[p];
    }
    return owner;
  }

  Fraction<Num> AgentFraction(int a, const Num& value) const {
    if (mms_[a] == ZeroOf(value)) return {Num(1), Num(1)};
    return {value, mms_[a]};
  }

  bool Pruned(int p) const {
    switch (kind_) {
      case SearchKind::kEnumerate:
        for (int a = 0; a < n_; ++a) {
          if (goods_thresholds_) {
            if (cur_[a] + rem_[a][p] < thresholds_[a]) return true;
          } else if (thresholds_[a] < cur_[a]) {
            return true;
          }
        }
        return false;
      case SearchKind::kFindAllAbove:
        for (int a = 0; a < n_; ++a) {
          if (!(bound_ < cur_[a] + rem_[a][p])) return true;
        }
        return false;
      case SearchKind::kFindAllBelow:
        for (int a = 0; a < n_; ++a) {
          if (!(cur_[a] < bound_)) return true;
        }
        return false;
      case SearchKind::kMaximizeMin:
        if (!has_best_) return false;
        for (int a = 0; a < n_; ++a) {
          if (!FractionLess(best_, AgentFraction(a, cur_[a] + rem_[a][p]))) {
            return true;
          }
        }
        return false;
      case SearchKind::kMinimizeMax:
        if (!has_best_) return false;
        for (int a = 0; a < n_; ++a) {
          if (!FractionLess(AgentFraction(a, cur_[a]), best_)) return true;
        }
        return false;
    }
    return false;
  }

  void Leaf() {
    ++visits_;
    switch (kind_) {
      case SearchKind::kEnumerate:
        if (visit_ && !visit_(ToItemOrder(owner_))) stop_ = true;
        return;
      case SearchKind::kFindAllAbove:
      case SearchKind::kFindAllBelow:
        has_best_ = true;
        best_owner_ = owner_;
        stop_ = true;
        return;
      case SearchKind::kMaximizeMin:
      case SearchKind::kMinimizeMax: {
        const bool maximize = kind_ == SearchKind::kMaximizeMin;
        Fraction<Num> f = AgentFraction(0, cur_[0]);
        for (int a = 1; a < n_; ++a) {
          Fraction<Num> g = AgentFraction(a, cur_[a]);
          if (maximize ? FractionLess(g, f) : FractionLess(f, g)) f = g;
        }
        if (!has_best_ ||
            (maximize ? FractionLess(best_, f) : FractionLess(f, best_))) {
          has_best_ = true;
          best_ = f;
          best_owner_ = owner_;
        }
        return;
      }
    }
  }

  void Dfs(int p) {
    if (p == m_) {
      Leaf();
      return;
    }
    for (int a = 0; a < n_ && !stop_; ++a) {
      if (!CanTake(a)) continue;
      Assign(p, a);
      if (!Pruned(p + 1)) Dfs(p + 1);
      Unassign(p);
    }
  }

 public:
  bool goods_thresholds_ = true;

 private:
  SearchKind kind_;
  int n_, m_;
  std::vector<int> order_;
  std::vector<int> prev_same_;
  std::vector<std::vector<Num>> val_, rem_;
  std::vector<Num> cur_;
  std::vector<int> count_;
  std::vector<int> owner_;
  std::vector<Num> thresholds_;
  std::vector<Num> mms_;
  Num bound_{};
  std::function<bool(const std::vector<int>&)> visit_;
  bool stop_ = false;
  bool has_best_ = false;
  Fraction<Num> best_{};
  std::vector<int> best_owner_;
  std::uint64_t visits_ = 0;
};

// prev_same[a] = largest a' < a with an identical valuation row, else -1.
std::vector<int> SymmetryLinks(const Instance& instance, bool enabled) {
  std::vector<int> prev(instance.agents(), -1);
  if (!enabled) return prev;
  for (int a = 0; a < instance.agents(); ++a) {
    for (int b = a - 1; b >= 0; --b) {
      if (instance.row(a) == instance.row(b)) {
        prev[a] = b;
        break;
      }
    }
  }
  return prev;
}

std::vector<std::vector<ExactNumber>> ExactValues(const Instance& instance) {
  return instance.values();
}

struct SearchOutcome {
  bool found = false;
  std::vector<int> owner;
};

// Runs `kind` possibly split across threads. Subtree results are merged in
// prefix order so the outcome matches the sequential run exactly.
template <class Num>
SearchOutcome RunSplitSearch(SearchKind kind,
                             const std::vector<std::vector<Num>>& values,
                             const std::vector<int>& order,
                             const std::vector<int>& prev_same,
                             const std::vector<Num>& mms, const Num& bound,
                             int threads) {
  auto make = [&] {
    AssignmentSearch<Num> s(kind, values, order, prev_same);
    s.set_mms(mms);
    s.set_bound(bound);
    return s;
  };
  const int m = static_cast<int>(order.size());
  const int n = static_cast<int>(values.size());
  if (threads <= 1 || m < 2 || n < 2) {
    AssignmentSearch<Num> s = make();
    s.Run({});
    return {s.found(), s.found() ? s.best_owner() : std::vector<int>{}};
  }
  int depth = 0;
  for (std::uint64_t tasks = 1; depth < m - 1 && tasks < 8u * threads; ++depth) {
    tasks *= static_cast<std::uint64_t>(n);
  }
  AssignmentSearch<Num> root = make();
  const std::vector<std::vector<int>> prefixes = root.Prefixes(depth);
  std::vector<std::optional<AssignmentSearch<Num>>> results(prefixes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < prefixes.size(); i = next++) {
      AssignmentSearch<Num> s = make();
      s.Run(prefixes[i]);
      results[i].emplace(std::move(s));
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const AssignmentSearch<Num>* chosen = nullptr;
  for (const auto& r : results) {
    if (!r->found()) continue;
    if (chosen == nullptr) {
      chosen = &*r;
      if (kind == SearchKind::kFindAllAbove || kind == SearchKind::kFindAllBelow) break;
      continue;
    }
    const bool improves = kind == SearchKind::kMaximizeMin
                              ? FractionLess(chosen->best(), r->best())
                              : FractionLess(r->best(), chosen->best());
    if (improves) chosen = &*r;
  }
  if (chosen == nullptr) return {};
  return {true, chosen->best_owner()};
}

void CheckAgent(const Instance& instance, int agent) {
  if (agent < 0 || agent >= instance.agents()) {
    throw ArgumentError("agent " + std::to_string(agent) + " out of range");
  }
}

}  // namespace

MMSCertificate mms(const Instance& instance, int agent,
                   const MmsOptions& options) {
  CheckAgent(instance, agent);
  const int m = instance.items();
  if (m > options.max_items || m > 30) {
    throw CapacityError("mms: " + std::to_string(m) +
                        " items exceeds the subset DP bound of " +
                        std::to_string(std::min(options.max_items, 30)) +
                        "; use the bounded search variant (witness partitions "
                        "with verify_negative) instead");
  }
  const bool goods = instance.mode() == Mode::kGoods;
  const int n = instance.agents();
  std::vector<std::uint32_t> masks;
  ExactNumber value;
  const IntegerImage image = internal::MakeIntegerImage(instance, {});
  if (image.fits) {
    DpOutcome<std::int64_t> r = RunMmsDp(image.values[agent], n, goods);
    value = ExactNumber(mpz_class(static_cast<long>(r.value))) /
            ExactNumber(image.scale);
    masks = std::move(r.masks);
  } else {
    DpOutcome<ExactNumber> r = RunMmsDp(instance.row(agent), n, goods);
    value = r.value;
    masks = std::move(r.masks);
  }
  std::vector<Bundle> bundles;
  bundles.reserve(masks.size());
  for (std::uint32_t mk : masks) bundles.push_back(Bundle::FromMask(mk));
  return MMSCertificate{agent, value, Allocation(std::move(bundles))};
}

std::vector<ExactNumber> mms_values(const Instance& instance,
                                    const MmsOptions& options) {
  std::vector<ExactNumber> out;
  out.reserve(instance.agents());
  for (int a = 0; a < instance.agents(); ++a) {
    out.push_back(mms(instance, a, options).value);
  }
  return out;
}

ExactNumber mms_fraction(const ExactNumber& value, const ExactNumber& mms) {
  if (mms.is_zero()) return ExactNumber(1);
  return value / mms;
}

std::uint64_t enumerate_allocations(const Instance& instance,
                                    const AllocationVisitor& visitor,
                                    const EnumerationOptions& options) {
  const int n = instance.agents();
  const int m = instance.items();
  const bool pruned = !options.thresholds.empty();
  if (pruned && static_cast<int>(options.thresholds.size()) != n) {
    throw ArgumentError("enumerate_allocations: need one threshold per agent");
  }
  if (!pruned) {
    std::uint64_t total = 1;
    for (int j = 0; j < m; ++j) {
      if (total > options.budget / static_cast<std::uint64_t>(n)) {
        throw CapacityError(
            "enumerate_allocations: n^m exceeds the budget of " +
            std::to_string(options.budget) + "; supply pruning thresholds");
      }
      total *= static_cast<std::uint64_t>(n);
    }
  }
  const std::vector<int> order = internal::ItemsByDecreasingMax(instance);
  const std::vector<int> links =
      SymmetryLinks(instance, options.canonical_symmetry);
  auto forward = [&](const std::vector<int>& owner) {
    return visitor(Allocation::FromOwners(owner, n));
  };
  const bool goods = instance.mode() == Mode::kGoods;
  const IntegerImage image =
      internal::MakeIntegerImage(instance, options.thresholds);
  if (image.fits) {
    AssignmentSearch<std::int64_t> s(SearchKind::kEnumerate, image.values,
                                     order, links);
    s.goods_thresholds_ = goods;
    s.set_thresholds(pruned ? image.extras
                            : std::vector<std::int64_t>(
                                  n, goods ? 0 : std::int64_t{1} << 62));
    s.set_visitor(forward);
    s.Run({});
    return s.visits();
  }
  AssignmentSearch<ExactNumber> s(SearchKind::kEnumerate, ExactValues(instance),
                                  order, links);
  s.goods_thresholds_ = goods;
  if (pruned) {
    s.set_thresholds(options.thresholds);
  } else {
    std::vector<ExactNumber> t(n);
    if (!goods) {
      for (int a = 0; a < n; ++a) t[a] = instance.total(a);
    }
    s.set_thresholds(std::move(t));
  }
  s.set_visitor(forward);
  s.Run({});
  return s.visits();
}

GapReport gap(const Instance& instance, const SearchOptions& options) {
  GapReport report;
  report.mode = instance.mode();
  report.per_agent_mms = mms_values(instance, options.mms);
  const int n = instance.agents();
  const bool goods = instance.mode() == Mode::kGoods;
  const SearchKind kind =
      goods ? SearchKind::kMaximizeMin : SearchKind::kMinimizeMax;
  const std::vector<int> order = internal::ItemsByDecreasingMax(instance);
  const std::vector<int> links = SymmetryLinks(instance, true);

  SearchOutcome outcome;
  const IntegerImage image =
      internal::MakeIntegerImage(instance, report.per_agent_mms);
  if (image.fits) {
    outcome = RunSplitSearch<std::int64_t>(kind, image.values, order, links,
                                           image.extras, 0, options.threads);
  } else {
    outcome = RunSplitSearch<ExactNumber>(kind, ExactValues(instance), order,
                                          links, report.per_agent_mms,
                                          ExactNumber(), options.threads);
  }
  if (!outcome.found) throw Error("gap: search produced no allocation");
  report.best_allocation = Allocation::FromOwners(outcome.owner, n);
  for (int a = 0; a < n; ++a) {
    const ExactNumber f =
        mms_fraction(bundle_value(instance, a, report.best_allocation[a]),
                     report.per_agent_mms[a]);
    if (a == 0 || (goods ? f < report.fraction : report.fraction < f)) {
      report.fraction = f;
    }
  }
  report.gap = goods ? ExactNumber(1) - report.fraction
                     : report.fraction - ExactNumber(1);
  if (report.gap.sign() < 0) report.gap = ExactNumber(0);
  return report;
}

NegativeVerdict verify_negative(const Instance& instance,
                                const std::vector<ExactNumber>& claimed_mms,
                                const ExactNumber& bound,
                                const SearchOptions& options) {
  const int n = instance.agents();
  if (static_cast<int>(claimed_mms.size()) != n) {
    throw CertificateError(
        static_cast<int>(std::min<std::size_t>(claimed_mms.size(), n)),
        "verify_negative: expected one claimed MMS per agent");
  }
  for (int a = 0; a < n; ++a) {
    const ExactNumber actual = mms(instance, a, options.mms).value;
    if (actual != claimed_mms[a]) {
      throw CertificateError(a, "verify_negative: agent " + std::to_string(a) +
                                    " has MMS " + actual.to_string() +
                                    ", claimed " +
                                    claimed_mms[a].to_string());
    }
  }
  const bool goods = instance.mode() == Mode::kGoods;
  const SearchKind kind =
      goods ? SearchKind::kFindAllAbove : SearchKind::kFindAllBelow;
  const std::vector<int> order = internal::ItemsByDecreasingMax(instance);
  const std::vector<int> links = SymmetryLinks(instance, true);
  const std::vector<ExactNumber> extras{bound};
  const IntegerImage image = internal::MakeIntegerImage(instance, extras);
  SearchOutcome outcome;
  if (image.fits) {
    outcome = RunSplitSearch<std::int64_t>(kind, image.values, order, links,
                                           std::vector<std::int64_t>(n, 1),
                                           image.extras[0], options.threads);
  } else {
    outcome = RunSplitSearch<ExactNumber>(
        kind, ExactValues(instance), order, links,
        std::vector<ExactNumber>(n, ExactNumber(1)), bound, options.threads);
  }
  NegativeVerdict verdict;
  verdict.confirmed = !outcome.found;
  if (outcome.found) {
    verdict.counterexample = Allocation::FromOwners(outcome.owner, n);
  }
  return verdict;
}

}  // namespace mmsfair
