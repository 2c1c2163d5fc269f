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


#include "mmsfair/maxgap.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "mmsfair/errors.hpp"
#include "mmsfair/maximin.hpp"

namespace mmsfair {
namespace {

constexpr char kRoleLetter[] = {'r', 'c', 'u'};
constexpr int kB = 27;

int Var(int role, int item) { return role * 9 + item; }

std::string ItemVar(int role, int item) {
  return std::string(1, kRoleLetter[role]) + std::to_string(item + 1);
}

std::string Digits(const std::vector<int>& items) {
  std::string s;
  for (int k : items) s += std::to_string(k + 1);
  return s;
}

const std::array<std::vector<Bundle>, 3>& Parts(StructureKind kind) {
  static const auto pd = canonical::Partitions(StructureKind::kParallelDiagonals);
  static const auto cd = canonical::Partitions(StructureKind::kCrossingDiagonals);
  if (kind == StructureKind::kParallelDiagonals) return pd;
  if (kind == StructureKind::kCrossingDiagonals) return cd;
  throw ArgumentError("maxgap: structure kind None has no model");
}

const char* BundleName(int role, int k) {
  static const char* kNames[3][3] = {
      {"R1", "R2", "R3"}, {"C1", "C2", "C3"}, {"P", "D", "Q"}};
  return kNames[role][k];
}

// Sum of role's values over the items minus b.
std::vector<Term> BundleMinusB(int role, const std::vector<int>& items) {
  std::vector<Term> t;
  for (int k : items) t.push_back(Term{Var(role, k), 1});
  t.push_back(Term{kB, -1});
  return t;
}

void AddOrderRows(MixedModel& m, StructureKind kind, int hi, int lo,
                  const std::string& group) {
  for (int role = 0; role < 3; ++role) {
    m.add_constraint(Constraint{
        "order_" + ItemVar(role, hi) + "_" + ItemVar(role, lo),
        {Term{Var(role, hi), 1}, Term{Var(role, lo), -1}},
        Relation::kGreaterEqual,
        order_delta(kind, role, hi, lo),
        group});
  }
}

bool SameBundle(StructureKind kind, int role, int a, int b) {
  for (const auto& bundle : Parts(kind)[role]) {
    if (bundle.contains(a) && bundle.contains(b)) return true;
  }
  return false;
}

}  // namespace

int order_delta(StructureKind kind, int role, int hi, int lo) {
  if (SameBundle(kind, role, hi, lo)) return 0;
  const std::pair<int, int> key{std::min(hi, lo), std::max(hi, lo)};
  for (const auto& e : canonical::SeparationExceptions(kind)) {
    if (e == key) return 0;
  }
  // Partial exceptions: v_R(e8) >= v_R(e2) and v_C(e6) >= v_C(e4).
  if (role == 0 && hi == 7 && lo == 1) return 0;
  if (role == 1 && hi == 5 && lo == 3) return 0;
  return 1;
}

std::vector<std::pair<int, int>> known_order_facts(StructureKind kind,
                                                   bool preload) {
  Parts(kind);
  // e4 over e2, e3 over e7, e8 over e6.
  std::vector<std::pair<int, int>> facts = {{3, 1}, {2, 6}, {7, 5}};
  if (kind == StructureKind::kCrossingDiagonals && preload) {
    facts.emplace_back(3, 8);  // e4 over e9
  }
  return facts;
}

std::vector<std::pair<int, int>> selected_order_pairs(StructureKind kind,
                                                      bool preload) {
  std::array<std::array<bool, 9>, 9> before{};
  for (const auto& [hi, lo] : known_order_facts(kind, preload)) {
    before[hi][lo] = true;
  }
  for (int k = 0; k < 9; ++k) {
    for (int i = 0; i < 9; ++i) {
      for (int j = 0; j < 9; ++j) {
        if (before[i][k] && before[k][j]) before[i][j] = true;
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 9; ++i) {
    for (int j = i + 1; j < 9; ++j) {
      if (!before[i][j] && !before[j][i]) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

MixedModel build_root_lp(StructureKind kind, const RootLpStages& stages) {
  const auto& parts = Parts(kind);
  MixedModel m;
  for (int role = 0; role < 3; ++role) {
    for (int k = 0; k < 9; ++k) m.add_variable(ItemVar(role, k));
  }
  m.add_variable("b", VarKind::kContinuous, ExactNumber(0));
  m.set_objective({Term{kB, 1}});

  for (int role = 0; role < 3; ++role) {
    for (int k = 0; k < 9; ++k) {
      m.add_constraint(Constraint{"pos_" + ItemVar(role, k),
                                  {Term{Var(role, k), 1}},
                                  Relation::kGreaterEqual,
                                  1,
                                  "positivity"});
    }
  }
  for (int role = 0; role < 3; ++role) {
    for (int k = 0; k < 3; ++k) {
      m.add_constraint(Constraint{
          std::string("mms_") + BundleName(role, k),
          BundleMinusB(role, parts[role][k].items()), Relation::kEqual, 0,
          "mms"});
    }
  }
  // R3, C3 and P are good for everyone; every other foreign bundle is bad.
  auto shared = [](int owner, int k) {
    return (owner == 0 && k == 2) || (owner == 1 && k == 2) ||
           (owner == 2 && k == 0);
  };
  for (int role = 0; role < 3; ++role) {
    for (int owner = 0; owner < 3; ++owner) {
      if (owner == role) continue;
      for (int k = 0; k < 3; ++k) {
        if (shared(owner, k)) continue;
        m.add_constraint(Constraint{
            std::string("bad_") + kRoleLetter[role] + "_" +
                BundleName(owner, k),
            BundleMinusB(role, parts[owner][k].items()),
            Relation::kLessEqual, -1, "bad"});
      }
    }
  }
  if (stages.order) {
    for (const auto& [hi, lo] : known_order_facts(kind, false)) {
      AddOrderRows(m, kind, hi, lo, "order");
    }
  }
  if (stages.allocation) {
    const std::vector<std::pair<int, std::vector<int>>> rows = {
        {2, {5, 6, 8}}, {2, {2, 8}}, {0, {2, 8}}};
    for (const auto& [role, items] : rows) {
      m.add_constraint(Constraint{
          std::string("alloc_") + kRoleLetter[role] + Digits(items),
          BundleMinusB(role, items), Relation::kLessEqual, -1, "allocation"});
    }
  }
  return m;
}

MixedModel build_mip(StructureKind kind, const MipConfig& config) {
  MixedModel m = build_root_lp(kind);
  const auto base = known_order_facts(kind, false);
  for (const auto& fact : known_order_facts(kind, config.preload)) {
    if (std::find(base.begin(), base.end(), fact) == base.end()) {
      AddOrderRows(m, kind, fact.first, fact.second, "preload");
    }
  }
  const ExactNumber& M = config.order_big_m;
  for (const auto& [i, j] : selected_order_pairs(kind, config.preload)) {
    const std::string s_name =
        "s" + std::to_string(i + 1) + std::to_string(j + 1);
    const int s = m.add_variable(s_name, VarKind::kBinary);
    for (int role = 0; role < 3; ++role) {
      // s = 1: item i first. s = 0: item j first.
      m.add_constraint(Constraint{
          s_name + "_" + kRoleLetter[role] + "_first",
          {Term{Var(role, i), 1}, Term{Var(role, j), -1}, Term{s, -M}},
          Relation::kGreaterEqual,
          ExactNumber(order_delta(kind, role, i, j)) - M,
          "selected_order"});
      m.add_constraint(Constraint{
          s_name + "_" + kRoleLetter[role] + "_second",
          {Term{Var(role, j), 1}, Term{Var(role, i), -1}, Term{s, M}},
          Relation::kGreaterEqual,
          ExactNumber(order_delta(kind, role, j, i)),
          "selected_order"});
    }
  }
  return m;
}

int add_allocation_rows(MixedModel& m, StructureKind kind,
                        const std::array<int, 9>& owner,
                        const ExactNumber& big_m) {
  const auto& parts = Parts(kind);
  std::array<std::vector<int>, 3> bundle;
  for (int k = 0; k < 9; ++k) {
    if (owner[k] < 0 || owner[k] > 2) {
      throw ArgumentError("add_allocation_rows: owner out of range");
    }
    bundle[owner[k]].push_back(k);
  }
  std::string tag;
  for (int role = 0; role < 3; ++role) tag += kRoleLetter[role] + Digits(bundle[role]);
  std::vector<int> short_roles;
  for (int role = 0; role < 3; ++role) {
    const Bundle mine(bundle[role]);
    bool covers_own = false;
    for (const auto& own : parts[role]) {
      covers_own |= std::includes(mine.items().begin(), mine.items().end(),
                                  own.items().begin(), own.items().end());
    }
    if (!covers_own) short_roles.push_back(role);
  }
  const std::string group = "selected_allocation";
  const int before = static_cast<int>(m.constraints().size());
  if (short_roles.empty()) return 0;
  if (m.constraint_index("alloc_" + tag) >= 0 ||
      m.constraint_index("alloc_" + tag + "_" +
                         kRoleLetter[short_roles[0]]) >= 0) {
    return 0;
  }
  if (short_roles.size() == 1) {
    const int role = short_roles[0];
    m.add_constraint(Constraint{"alloc_" + tag, BundleMinusB(role, bundle[role]),
                                Relation::kLessEqual, -1, group});
  } else if (short_roles.size() == 2) {
    // One binary: s = 0 forces the first agent, s = 1 the second.
    std::string s_name = "s_";
    for (int role : short_roles) s_name += kRoleLetter[role] + Digits(bundle[role]);
    if (m.variable_index(s_name) >= 0) s_name += "_" + tag;
    const int s = m.add_variable(s_name, VarKind::kBinary);
    auto first = BundleMinusB(short_roles[0], bundle[short_roles[0]]);
    first.push_back(Term{s, -big_m});
    m.add_constraint(Constraint{"alloc_" + tag + "_" + kRoleLetter[short_roles[0]],
                                first, Relation::kLessEqual, -1, group});
    auto second = BundleMinusB(short_roles[1], bundle[short_roles[1]]);
    second.push_back(Term{s, big_m});
    m.add_constraint(Constraint{"alloc_" + tag + "_" + kRoleLetter[short_roles[1]],
                                second, Relation::kLessEqual,
                                big_m - ExactNumber(1), group});
  } else {
    std::vector<Term> pick;
    for (int role : short_roles) {
      const int y = m.add_variable(
          "y_" + tag + "_" + kRoleLetter[role], VarKind::kBinary);
      auto row = BundleMinusB(role, bundle[role]);
      row.push_back(Term{y, big_m});
      m.add_constraint(Constraint{"alloc_" + tag + "_" + kRoleLetter[role], row,
                                  Relation::kLessEqual, big_m - ExactNumber(1),
                                  group});
      pick.push_back(Term{y, 1});
    }
    m.add_constraint(Constraint{"alloc_" + tag + "_pick", pick,
                                Relation::kGreaterEqual, 1, group});
  }
  return static_cast<int>(m.constraints().size()) - before;
}

Instance instance_from_solution(const MixedModel& model,
                                const std::vector<ExactNumber>& x) {
  std::vector<std::vector<ExactNumber>> v(3);
  for (int role = 0; role < 3; ++role) {
    for (int k = 0; k < 9; ++k) {
      const int j = model.variable_index(ItemVar(role, k));
      if (j < 0 || j >= static_cast<int>(x.size())) {
        throw ArgumentError("instance_from_solution: missing " +
                            ItemVar(role, k));
      }
      v[role].push_back(x[j]);
    }
  }
  return Instance(Mode::kGoods, std::move(v));
}

// ---------------------------------------------------------------------------

namespace {

bool Terminating(const mpz_class& den) {
  mpz_class d = den;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
  return d == 1;
}

std::string Decimal(const ExactNumber& v) {
  if (v.is_integer()) return v.to_string();
  mpz_class den = v.denominator();
  int digits = 0;
  mpz_class scale = 1;
  while (mpz_divisible_p(scale.get_mpz_t(), den.get_mpz_t()) == 0) {
    scale *= 10;
    ++digits;
  }
  mpz_class scaled = v.numerator() * (scale / den);
  const bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) {
    s.insert(0, digits - s.size() + 1, '0');
  }
  s.insert(s.size() - digits, ".");
  return neg ? "-" + s : s;
}

// Scale so that every value has a terminating expansion; 1 when none needed.
mpz_class RowScale(const std::vector<ExactNumber>& values) {
  bool ok = true;
  mpz_class l = 1;
  for (const auto& v : values) {
    ok &= Terminating(v.denominator());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.denominator().get_mpz_t());
  }
  return ok ? mpz_class(1) : l;
}

std::string Expression(const MixedModel& m, const std::vector<Term>& terms,
                       const mpz_class& scale) {
  if (terms.empty()) {
    return m.variables().empty() ? "" : "0 " + m.variables()[0].name;
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    ExactNumber c = t.coef * ExactNumber(scale);
    const bool neg = c.sign() < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "- ";
    } else {
      os << (neg ? " - " : " + ");
    }
    if (c != 1) os << Decimal(c) << ' ';
    os << m.variables()[t.var].name;
    first = false;
  }
  return os.str();
}

}  // namespace

std::string emit_lp_file(const MixedModel& m) {
  std::ostringstream os;
  os << "\\ mmsfair model: " << m.variables().size() << " variables, "
     << m.constraints().size() << " constraints\n";
  {
    std::vector<ExactNumber> coefs;
    for (const auto& t : m.objective()) coefs.push_back(t.coef);
    const mpz_class scale = RowScale(coefs);
    if (scale != 1) os << "\\ objective multiplied by " << scale.get_str() << "\n";
    const std::string expr = Expression(m, m.objective(), scale);
    os << "Minimize\n obj:" << (expr.empty() ? "" : " " + expr) << "\n";
  }
  os << "Subject To\n";
  for (const auto& c : m.constraints()) {
    std::vector<ExactNumber> values;
    for (const auto& t : c.terms) values.push_back(t.coef);
    values.push_back(c.rhs);
    const mpz_class scale = RowScale(values);
    if (scale != 1) {
      os << "\\ " << c.name << " multiplied by " << scale.get_str() << "\n";
    }
    const char* rel = c.relation == Relation::kLessEqual  ? "<="
                      : c.relation == Relation::kEqual    ? "="
                                                          : ">=";
    os << " " << c.name << ": " << Expression(m, c.terms, scale) << " " << rel
       << " " << Decimal(c.rhs * ExactNumber(scale)) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : m.variables()) {
    if (v.kind == VarKind::kBinary) continue;
    if (!v.lower && !v.upper) {
      os << " " << v.name << " free\n";
    } else if (v.lower && v.upper) {
      os << " " << Decimal(*v.lower) << " <= " << v.name
         << " <= " << Decimal(*v.upper) << "\n";
    } else if (v.lower) {
      os << " " << v.name << " >= " << Decimal(*v.lower) << "\n";
    } else {
      os << " -inf <= " << v.name << " <= " << Decimal(*v.upper) << "\n";
    }
  }
  if (m.binary_count() > 0) {
    os << "Binaries\n";
    for (const auto& v : m.variables()) {
      if (v.kind == VarKind::kBinary) os << " " << v.name << "\n";
    }
  }
  os << "End\n";
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

// Allocations of the candidate that give every agent more than b - 1, in
// mask order (R's mask, then C's), up to `limit`.
std::vector<std::array<int, 9>> ViolatingAllocations(const Instance& inst,
                                                     const ExactNumber& b,
                                                     int limit) {
  const ExactNumber floor = b - ExactNumber(1);
  std::array<std::array<bool, 512>, 3> above{};
  for (int a = 0; a < 3; ++a) {
    std::array<ExactNumber, 512> value;
    for (unsigned m = 1; m < 512; ++m) {
      value[m] = value[m & (m - 1)] + inst.value(a, std::countr_zero(m));
      above[a][m] = value[m] > floor;
    }
    above[a][0] = ExactNumber(0) > floor;
  }
  std::vector<std::array<int, 9>> out;
  for (unsigned r = 0; r < 512 && static_cast<int>(out.size()) < limit; ++r) {
    if (!above[0][r]) continue;
    const unsigned rest = 511 & ~r;
    // Subsets of rest in increasing order.
    for (unsigned c = 0;; c = (c - rest) & rest) {
      const unsigned u = rest & ~c;
      if (above[1][c] && above[2][u]) {
        std::array<int, 9> owner{};
        for (int k = 0; k < 9; ++k) {
          owner[k] = (r >> k & 1) ? 0 : (c >> k & 1) ? 1 : 2;
        }
        out.push_back(owner);
        if (static_cast<int>(out.size()) >= limit) break;
      }
      if (c == rest) break;
    }
  }
  return out;
}

std::string OwnerString(const std::array<int, 9>& owner) {
  std::string s;
  for (int k : owner) s += "RCU"[k];
  return s;
}

}  // namespace

MaxGapResult search_max_gap(StructureKind kind, const MaxGapOptions& options) {
  Parts(kind);
  MaxGapResult out;
  out.kind = kind;
  MipConfig config = options.mip;
  std::vector<std::array<int, 9>> cuts;
  const LazyCallback lazy = [&](MixedModel& m,
                                const std::vector<ExactNumber>& x) {
    const Instance cand = instance_from_solution(m, x);
    const ExactNumber b = x[m.variable_index("b")];
    int added = 0;
    for (const auto& owner :
         ViolatingAllocations(cand, b, options.cuts_per_round)) {
      const int rows =
          add_allocation_rows(m, kind, owner, config.allocation_big_m);
      if (rows == 0) {
        throw Error("search_max_gap: allocation " + OwnerString(owner) +
                    " gives every agent an own MMS bundle");
      }
      cuts.push_back(owner);
      added += rows;
    }
    return added > 0;
  };

  for (;;) {
    MixedModel model = build_mip(kind, config);
    for (const auto& owner : cuts) {
      add_allocation_rows(model, kind, owner, config.allocation_big_m);
    }
    SolveOptions so = options.solve;
    so.lazy = lazy;
    out.solve = solve(model, so);
    out.model = std::move(model);
    out.order_big_m = config.order_big_m;
    out.allocation_big_m = config.allocation_big_m;
    out.status = out.solve.status;
    if (out.solve.status != SolveStatus::kOptimal) {
      out.notes.push_back(std::string("solver status ") +
                          std::string(SolveStatusName(out.solve.status)));
      return out;
    }
    out.b = out.solve.objective;
    // Order rows must not bind when inactive: item differences are at most
    // b - 2, so M >= b - 1 suffices. Allocation rows: bundles are at most
    // 3b, so M >= 2b + 1.
    const bool order_ok = config.order_big_m >= out.b - ExactNumber(1);
    const bool alloc_ok =
        config.allocation_big_m >= ExactNumber(2) * out.b + ExactNumber(1);
    out.big_m_certified = order_ok && alloc_ok;
    if (out.big_m_certified || !options.validate_big_m || out.resolves >= 3) {
      break;
    }
    std::ostringstream note;
    note << "big-M check failed at b = " << out.b << " (order M "
         << config.order_big_m << ", allocation M " << config.allocation_big_m
         << "); re-solving";
    out.notes.push_back(note.str());
    if (!order_ok) config.order_big_m = out.b - ExactNumber(1);
    if (!alloc_ok) config.allocation_big_m = ExactNumber(2) * out.b + ExactNumber(1);
    ++out.resolves;
  }

  out.instance = instance_from_solution(out.model, out.solve.assignment);
  auto all_integral = [](const Instance& inst) {
    for (const auto& row : inst.values()) {
      for (const auto& v : row) {
        if (!v.is_integer()) return false;
      }
    }
    return true;
  };
  out.values_integral = all_integral(out.instance);
  if (!out.values_integral && options.integral_extraction) {
    // Same b, integral item values: branch on the continuous variables.
    MixedModel model = out.model;
    model.add_constraint(Constraint{"extract_b",
                                    {Term{model.variable_index("b"), 1}},
                                    Relation::kLessEqual, out.b,
                                    "extraction"});
    SolveOptions so = options.solve;
    so.lazy = lazy;
    so.integer_continuous = true;
    const SolveResult integral = solve(model, so);
    if (integral.status == SolveStatus::kOptimal &&
        integral.objective == out.b) {
      out.model = std::move(model);
      out.solve.assignment = integral.assignment;
      out.solve.node_count += integral.node_count;
      out.solve.lp_pivots += integral.lp_pivots;
      out.solve.lazy_rounds += integral.lazy_rounds;
      out.solve.lazy_rows += integral.lazy_rows;
      out.instance = instance_from_solution(out.model, out.solve.assignment);
      out.values_integral = true;
    } else {
      out.notes.push_back("no integral instance found at b = " +
                          out.b.to_string() + " (" +
                          std::string(SolveStatusName(integral.status)) +
                          "); keeping the rational vertex");
    }
  }
  out.b_integral = out.b.is_integer();
  if (!out.b_integral) out.notes.push_back("fractional optimum b = " + out.b.to_string());
  const std::vector<ExactNumber> mms = mms_values(out.instance);
  bool mms_is_b = true;
  for (const auto& v : mms) mms_is_b &= v == out.b;
  if (!mms_is_b) out.notes.push_back("some agent's MMS differs from b");
  const NegativeVerdict verdict =
      verify_negative(out.instance, mms, out.b - ExactNumber(1));
  out.verified_negative = mms_is_b && verdict.confirmed;
  const MaxGapConditionsReport report = check_max_gap_necessary_conditions(
      out.instance, out.b, canonical_structure(out.instance, kind));
  out.conditions_hold = report.all_hold();
  for (const auto& c : report.clauses) {
    if (!c.holds) out.notes.push_back("clause " + std::to_string(c.number) +
                                      " (" + c.name + ") fails");
  }
  for (const auto& a : report.ambiguities) out.notes.push_back(a);
  return out;
}

}  // namespace mmsfair
