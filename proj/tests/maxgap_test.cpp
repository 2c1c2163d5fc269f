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

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lp_oracle.hpp"
#include "mip_oracle.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/maximin.hpp"
#include "mmsfair/maxgap.hpp"
#include "rational.hpp"

namespace mmsfair {
namespace {

using internal::Rational;
using oracle::MakeRandomMip;
using oracle::RandomMip;
using oracle::MipOracle;
using oracle::Satisfies;

TEST_CASE("hybrid rationals agree with GMP, including past 64 bits") {
  std::mt19937_64 rng(5);
  auto draw = [&]() -> mpq_class {
    const int kind = static_cast<int>(rng() % 3);
    std::int64_t num = static_cast<std::int64_t>(rng());
    std::int64_t den = static_cast<std::int64_t>(rng() % 1000) + 1;
    if (kind == 0) num %= 100;
    if (kind == 1) den = 1;
    if (num == std::numeric_limits<std::int64_t>::min()) num = 0;
    mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q.canonicalize();
    return q;
  };
  for (int i = 0; i < 20000; ++i) {
    const mpq_class a = draw(), b = draw();
    const Rational ra(a), rb(b);
    CHECK((ra + rb).ToMpq() == a + b);
    CHECK((ra - rb).ToMpq() == a - b);
    const Rational prod = ra * rb;
    CHECK(prod.ToMpq() == a * b);
    CHECK((prod * prod).ToMpq() == a * b * a * b);
    if (b != 0) CHECK((ra / rb).ToMpq() == a / b);
    CHECK((Compare(ra, rb) < 0) == (a < b));
    CHECK((ra == rb) == (a == b));
    CHECK((-ra).ToMpq() == -a);
  }
  CHECK(Rational(7).floor() == Rational(7));
  CHECK((Rational(-7) / Rational(2)).floor() == Rational(-4));
  CHECK((Rational(7) / Rational(2)).fractionality() == Rational(1) / Rational(2));
  CHECK((Rational(10) / Rational(3)).fractionality() == Rational(1) / Rational(3));
  CHECK_THROWS_AS(Rational(1) / Rational(0), ArgumentError);
}

TEST_CASE("trivial LPs") {
  MixedModel m;
  const int b = m.add_variable("b");
  m.set_objective({Term{b, 1}});
  m.add_constraint(Constraint{"lb", {Term{b, 1}}, Relation::kGreaterEqual, 3, ""});
  SolveResult r = solve(m);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == 3);
  CHECK(r.value(m, "b") == 3);

  // Free variables bounded only through the rows.
  MixedModel f;
  const int x = f.add_variable("x"), y = f.add_variable("y");
  f.set_objective({Term{x, -1}});
  f.add_constraint(Constraint{"a", {Term{x, 1}, Term{y, -1}}, Relation::kLessEqual, 1, ""});
  MixedModel g = f;
  f.add_constraint(Constraint{"b", {Term{y, 1}}, Relation::kLessEqual, 3, ""});
  r = solve(f);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == -4);
  CHECK(solve(g).status == SolveStatus::kUnbounded);

  MixedModel h;
  const int z = h.add_variable("z", VarKind::kContinuous, ExactNumber(0));
  h.set_objective({Term{z, 1}});
  h.add_constraint(Constraint{"lo", {Term{z, 1}}, Relation::kGreaterEqual, 2, ""});
  h.add_constraint(Constraint{"hi", {Term{z, 1}}, Relation::kLessEqual, 1, ""});
  CHECK(solve(h).status == SolveStatus::kInfeasible);

  // Degenerate equalities and a fractional optimum.
  MixedModel d;
  const int p = d.add_variable("p", VarKind::kContinuous, ExactNumber(0));
  const int q = d.add_variable("q", VarKind::kContinuous, ExactNumber(0));
  d.set_objective({Term{p, 1}, Term{q, 1}});
  d.add_constraint(Constraint{"e1", {Term{p, 3}, Term{q, 1}}, Relation::kGreaterEqual, 2, ""});
  d.add_constraint(Constraint{"e2", {Term{p, 1}, Term{q, 3}}, Relation::kGreaterEqual, 2, ""});
  d.add_constraint(Constraint{"e3", {Term{p, 1}, Term{q, -1}}, Relation::kEqual, 0, ""});
  r = solve(d);
  CHECK(r.objective == ExactNumber(1));
  CHECK(r.value(d, "p") == ExactNumber(1) / ExactNumber(2));
}

TEST_CASE("model validation") {
  MixedModel m;
  m.add_variable("x");
  CHECK_THROWS_AS(m.add_variable("x"), ArgumentError);
  CHECK_THROWS_AS(m.add_variable(""), ArgumentError);
  CHECK_THROWS_AS(m.add_constraint(Constraint{"c", {Term{3, 1}}, Relation::kEqual, 0, ""}),
                  ArgumentError);
  m.add_constraint(Constraint{"c", {Term{0, 1}, Term{0, 2}}, Relation::kEqual, 0, ""});
  CHECK(m.constraints()[0].terms.size() == 1);
  CHECK(m.constraints()[0].terms[0].coef == 3);
  CHECK_THROWS_AS(m.add_constraint(Constraint{"c", {}, Relation::kEqual, 0, ""}),
                  ArgumentError);
  const int y = m.add_variable("y", VarKind::kBinary);
  CHECK(*m.variables()[y].lower == 0);
  CHECK(*m.variables()[y].upper == 1);
}

TEST_CASE("random LPs match vertex enumeration") {
  std::mt19937_64 rng(17);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const RandomMip r = MakeRandomMip(rng, 2 + static_cast<int>(rng() % 2), 0,
                                      2 + static_cast<int>(rng() % 5));
    SolveOptions o;
    o.check_every_lp = true;
    const SolveResult s = solve(r.model, o);
    const auto expected = MipOracle(r);
    REQUIRE((s.status == SolveStatus::kOptimal) == expected.has_value());
    CHECK(s.lp_checks_passed);
    if (!expected) continue;
    ++feasible;
    CHECK(s.objective.raw() == *expected);
    CHECK(Satisfies(r.model, s.assignment));
  }
  CHECK(feasible > 50);
}

TEST_CASE("random MIPs match exhaustive binary enumeration") {
  std::mt19937_64 rng(23);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 10);
    const RandomMip r =
        MakeRandomMip(rng, 2, k, 3 + static_cast<int>(rng() % 10));
    SolveOptions o;
    o.check_every_lp = true;
    const SolveResult s = solve(r.model, o);
    const auto expected = MipOracle(r);
    CAPTURE(trial);
    REQUIRE((s.status == SolveStatus::kOptimal) == expected.has_value());
    CHECK(s.lp_checks_passed);
    if (!expected) continue;
    ++feasible;
    CHECK(s.objective.raw() == *expected);
    CHECK(Satisfies(r.model, s.assignment));
  }
  CHECK(feasible > 30);
}

TEST_CASE("lazy rows and budget") {
  // min -x - y over binaries, with the lazy rule x + y <= 1.
  MixedModel m;
  const int x = m.add_variable("x", VarKind::kBinary);
  const int y = m.add_variable("y", VarKind::kBinary);
  m.set_objective({Term{x, -1}, Term{y, -1}});
  SolveOptions o;
  std::vector<std::string> events;
  o.log = [&](std::string_view line) { events.emplace_back(line); };
  o.lazy = [&](MixedModel& model, const std::vector<ExactNumber>& v) {
    if (v[x] + v[y] <= 1) return false;
    model.add_constraint(Constraint{"cut", {Term{x, 1}, Term{y, 1}},
                                    Relation::kLessEqual, 1, "lazy"});
    return true;
  };
  const SolveResult r = solve(m, o);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == -1);
  CHECK(r.lazy_rounds == 1);
  CHECK(m.constraints().size() == 1);
  bool saw_lazy = false;
  for (const auto& e : events) {
    const auto j = nlohmann::json::parse(e);
    CHECK(j.contains("event"));
    saw_lazy |= j["event"] == "lazy_rows";
  }
  CHECK(saw_lazy);

  SolveOptions tight;
  tight.node_limit = 1;
  const SolveResult partial = solve(build_mip(StructureKind::kParallelDiagonals), tight);
  CHECK(partial.status == SolveStatus::kBudgetExhausted);
  REQUIRE(partial.best_bound);
  CHECK(*partial.best_bound >= 19);
  CHECK(*partial.best_bound <= 40);
}

TEST_CASE("root LP blocks and staged optima") {
  for (StructureKind kind : {StructureKind::kParallelDiagonals,
                             StructureKind::kCrossingDiagonals}) {
    const MixedModel m = build_root_lp(kind);
    CHECK(m.variables().size() == 28);
    CHECK(m.constraints().size() == 60);
    CHECK(m.count_group("positivity") == 27);
    CHECK(m.count_group("mms") == 9);
    CHECK(m.count_group("bad") == 12);
    CHECK(m.count_group("order") == 9);
    CHECK(m.count_group("allocation") == 3);
    CHECK(m.binary_count() == 0);
  }
  const MixedModel pd = build_root_lp(StructureKind::kParallelDiagonals);
  const auto& d = pd.constraints()[pd.constraint_index("mms_D")];
  std::vector<int> vars;
  for (const auto& t : d.terms) vars.push_back(t.var);
  CHECK(vars == std::vector<int>{18 + 2, 18 + 4, 18 + 6, 27});

  SolveOptions o;
  o.check_every_lp = true;
  const std::vector<std::pair<RootLpStages, int>> stages = {
      {{false, false}, 13}, {{true, false}, 16}, {{true, true}, 19}};
  for (const auto& [st, expected] : stages) {
    const SolveResult r = solve(build_root_lp(StructureKind::kParallelDiagonals, st), o);
    CHECK(r.status == SolveStatus::kOptimal);
    CHECK(r.objective == expected);
    CHECK(r.lp_checks_passed);
  }
}

TEST_CASE("order facts and selected pairs") {
  // Order rows for the pair (e4, e2): r4 >= r2 + 1, c4 >= c2 + 1, u4 >= u2.
  using K = StructureKind;
  CHECK(order_delta(K::kParallelDiagonals, 0, 3, 1) == 1);
  CHECK(order_delta(K::kParallelDiagonals, 1, 3, 1) == 1);
  CHECK(order_delta(K::kParallelDiagonals, 2, 3, 1) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 2, 2, 6) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 2, 7, 5) == 0);
  CHECK(order_delta(K::kCrossingDiagonals, 2, 2, 6) == 0);
  // Exceptions and partial exceptions.
  CHECK(order_delta(K::kParallelDiagonals, 0, 5, 8) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 0, 2, 5) == 1);
  CHECK(order_delta(K::kCrossingDiagonals, 0, 2, 5) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 0, 7, 1) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 0, 1, 7) == 1);
  CHECK(order_delta(K::kParallelDiagonals, 1, 5, 3) == 0);
  CHECK(order_delta(K::kParallelDiagonals, 2, 3, 8) == 1);

  for (K kind : {K::kParallelDiagonals, K::kCrossingDiagonals}) {
    const auto facts = known_order_facts(kind);
    // Closure oracle: pairs linked by a chain of facts.
    std::set<std::pair<int, int>> closed(facts.begin(), facts.end());
    for (bool grew = true; grew;) {
      grew = false;
      for (auto [a, b] : std::set(closed)) {
        for (auto [c, d] : std::set(closed)) {
          if (b == c && closed.insert({a, d}).second) grew = true;
        }
      }
    }
    const auto pairs = selected_order_pairs(kind);
    CHECK(pairs.size() == 36 - closed.size());
    for (auto [i, j] : pairs) {
      CHECK(!closed.count({i, j}));
      CHECK(!closed.count({j, i}));
    }
    const MixedModel mip = build_mip(kind);
    CHECK(mip.binary_count() == static_cast<int>(pairs.size()));
    CHECK(mip.count_group("selected_order") == 6 * static_cast<int>(pairs.size()));
  }
  CHECK(selected_order_pairs(K::kParallelDiagonals).size() == 33);
  CHECK(build_mip(K::kCrossingDiagonals).count_group("preload") == 3);

  // The six rows of s49.
  const MixedModel mip = build_mip(K::kParallelDiagonals);
  const int s = mip.variable_index("s49");
  REQUIRE(s >= 0);
  const auto& row = mip.constraints()[mip.constraint_index("s49_u_first")];
  CHECK(row.rhs == -39);
  CHECK(row.terms.back().var == s);
  CHECK(row.terms.back().coef == -40);
  CHECK(mip.constraints()[mip.constraint_index("s49_r_second")].rhs == 1);
}

TEST_CASE("selected allocation rows") {
  MixedModel m = build_root_lp(StructureKind::kParallelDiagonals);
  // (e1,e2,e3) to R, (e4,e6,e8) to C, (e5,e7,e9) to U. R holds R1, so one
  // binary decides between C and U.
  const std::array<int, 9> owner = {0, 0, 0, 1, 2, 1, 2, 1, 2};
  CHECK(add_allocation_rows(m, StructureKind::kParallelDiagonals, owner) == 2);
  const int s = m.variable_index("s_c468u579");
  REQUIRE(s >= 0);
  const auto& c = m.constraints()[m.constraint_index("alloc_r123c468u579_c")];
  CHECK(c.rhs == -1);
  CHECK(c.terms.back().var == s);
  CHECK(c.terms.back().coef == -100);
  const auto& u = m.constraints()[m.constraint_index("alloc_r123c468u579_u")];
  CHECK(u.rhs == 99);
  CHECK(u.terms.back().coef == 100);
  // Adding it again is a no-op.
  CHECK(add_allocation_rows(m, StructureKind::kParallelDiagonals, owner) == 0);

  // Everyone short: one binary per agent and a pick row.
  const std::array<int, 9> spread = {0, 1, 2, 2, 0, 1, 1, 2, 0};
  CHECK(add_allocation_rows(m, StructureKind::kParallelDiagonals, spread) == 4);
  CHECK(m.variable_index("y_r159c267u348_u") >= 0);
  // U holds D = (e3,e5,e7), so only R and C are short.
  const std::array<int, 9> diag = {0, 1, 2, 1, 2, 0, 2, 0, 1};
  CHECK(add_allocation_rows(m, StructureKind::kParallelDiagonals, diag) == 2);
  // R takes everything: C and U are short.
  const std::array<int, 9> all = {0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK(add_allocation_rows(m, StructureKind::kParallelDiagonals, all) == 2);
  CHECK_THROWS_AS(add_allocation_rows(m, StructureKind::kParallelDiagonals,
                                      {0, 0, 0, 0, 0, 0, 0, 0, 3}),
                  ArgumentError);
}

TEST_CASE("LP file emission") {
  const std::string lp = emit_lp_file(build_root_lp(StructureKind::kParallelDiagonals));
  CHECK(lp == emit_lp_file(build_root_lp(StructureKind::kParallelDiagonals)));
  std::ifstream golden(std::string(MMSFAIR_TEST_DATA) + "/pd_root.lp");
  REQUIRE(golden.good());
  std::stringstream ss;
  ss << golden.rdbuf();
  CHECK(lp == ss.str());

  CHECK(emit_lp_file(MixedModel{}) ==
        "\\ mmsfair model: 0 variables, 0 constraints\n"
        "Minimize\n obj:\nSubject To\nBounds\nEnd\n");

  MixedModel q;
  const int x = q.add_variable("x");
  const int y = q.add_variable("y", VarKind::kBinary);
  q.set_objective({Term{x, ExactNumber(1) / ExactNumber(4)}});
  q.add_constraint(Constraint{"half", {Term{x, ExactNumber(1) / ExactNumber(2)}, Term{y, -2}},
                              Relation::kGreaterEqual, ExactNumber(3) / ExactNumber(4), ""});
  q.add_constraint(Constraint{"third", {Term{x, ExactNumber(1) / ExactNumber(3)}, Term{y, 1}},
                              Relation::kLessEqual, 5, ""});
  CHECK(emit_lp_file(q) ==
        "\\ mmsfair model: 2 variables, 2 constraints\n"
        "Minimize\n obj: 0.25 x\n"
        "Subject To\n"
        " half: 0.5 x - 2 y >= 0.75\n"
        "\\ third multiplied by 3\n"
        " third: x + 3 y <= 15\n"
        "Bounds\n x free\nBinaries\n y\nEnd\n");
}

TEST_CASE("max-gap search, parallel diagonals") {
  const MaxGapResult r = search_max_gap(StructureKind::kParallelDiagonals);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.b == 40);
  CHECK(r.big_m_certified);
  CHECK(r.resolves == 0);
  CHECK(r.verified_negative);
  CHECK(r.conditions_hold);
  CHECK(r.values_integral);
  CHECK(Satisfies(r.model, r.solve.assignment));
  // Independent checks on the returned instance.
  CHECK(mms_values(r.instance) == std::vector<ExactNumber>{40, 40, 40});
  CHECK(gap(r.instance).gap == ExactNumber(1) / ExactNumber(40));
  CHECK(detect_structure(r.instance).kind == StructureKind::kParallelDiagonals);
}

TEST_CASE("max-gap search, crossing diagonals") {
  const MaxGapResult r = search_max_gap(StructureKind::kCrossingDiagonals);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.b == 47);
  // M = 40 does not certify b = 47; the re-solve with M = 46 does.
  CHECK(r.resolves == 1);
  CHECK(r.order_big_m == 46);
  CHECK(r.big_m_certified);
  CHECK(r.verified_negative);
  CHECK(r.conditions_hold);
  CHECK(mms_values(r.instance) == std::vector<ExactNumber>{47, 47, 47});
  CHECK(gap(r.instance).gap == ExactNumber(1) / ExactNumber(47));
}

}  // namespace
}  // namespace mmsfair
