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


// Random small MIPs and a brute-force reference: every binary assignment,
// then the continuous part by vertex enumeration.

#ifndef MMSFAIR_TESTS_MIP_ORACLE_HPP_
#define MMSFAIR_TESTS_MIP_ORACLE_HPP_

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lp_oracle.hpp"
#include "mmsfair/maxgap.hpp"

namespace mmsfair::oracle {

// Exact feasibility of an assignment, bounds and integrality included.
inline bool Satisfies(const MixedModel& m, const std::vector<ExactNumber>& x) {
  for (const auto& c : m.constraints()) {
    ExactNumber s;
    for (const auto& t : c.terms) s += t.coef * x[t.var];
    if (c.relation == Relation::kLessEqual && s > c.rhs) return false;
    if (c.relation == Relation::kGreaterEqual && s < c.rhs) return false;
    if (c.relation == Relation::kEqual && s != c.rhs) return false;
  }
  for (int j = 0; j < static_cast<int>(m.variables().size()); ++j) {
    const auto& v = m.variables()[j];
    if (v.lower && x[j] < *v.lower) return false;
    if (v.upper && x[j] > *v.upper) return false;
    if (v.kind == VarKind::kBinary && !x[j].is_integer()) return false;
  }
  return true;
}

struct RandomMip {
  MixedModel model;
  int continuous = 0;
  int binaries = 0;
};

inline RandomMip MakeRandomMip(std::mt19937_64& rng, int continuous, int binaries,
                        int rows) {
  RandomMip r;
  r.continuous = continuous;
  r.binaries = binaries;
  auto uni = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
  };
  for (int j = 0; j < continuous; ++j) {
    r.model.add_variable("x" + std::to_string(j), VarKind::kContinuous,
                         ExactNumber(-5), ExactNumber(5));
  }
  for (int j = 0; j < binaries; ++j) {
    r.model.add_variable("y" + std::to_string(j), VarKind::kBinary);
  }
  const int n = continuous + binaries;
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back(Term{j, uni(-3, 3)});
  r.model.set_objective(obj);
  for (int k = 0; k < rows; ++k) {
    std::vector<Term> t;
    for (int j = 0; j < n; ++j) {
      if (rng() % 10 < 6) t.push_back(Term{j, uni(-3, 3)});
    }
    const int rel = uni(0, 4);
    r.model.add_constraint(Constraint{
        "r" + std::to_string(k), t,
        rel == 0 ? Relation::kEqual
                 : (rel <= 2 ? Relation::kLessEqual : Relation::kGreaterEqual),
        ExactNumber(uni(-4, 6)) / ExactNumber(uni(1, 2)), ""});
  }
  return r;
}

// Minimum over all binary assignments of the LP over the continuous part.
inline std::optional<mpq_class> MipOracle(const RandomMip& r) {
  const auto& m = r.model;
  std::optional<mpq_class> best;
  for (int mask = 0; mask < (1 << r.binaries); ++mask) {
    std::vector<mpq_class> fixed(r.binaries);
    for (int b = 0; b < r.binaries; ++b) fixed[b] = (mask >> b) & 1;
    std::vector<HalfSpace> hs;
    auto add = [&](std::vector<mpq_class> a, mpq_class rhs, int sign) {
      for (auto& v : a) v *= sign;
      hs.push_back(HalfSpace{std::move(a), rhs * sign});
    };
    for (const auto& c : m.constraints()) {
      std::vector<mpq_class> a(r.continuous);
      mpq_class rhs = c.rhs.raw();
      for (const auto& t : c.terms) {
        if (t.var < r.continuous) {
          a[t.var] += t.coef.raw();
        } else {
          rhs -= t.coef.raw() * fixed[t.var - r.continuous];
        }
      }
      if (c.relation != Relation::kLessEqual) add(a, rhs, 1);
      if (c.relation != Relation::kGreaterEqual) add(a, rhs, -1);
    }
    for (int j = 0; j < r.continuous; ++j) {
      std::vector<mpq_class> a(r.continuous);
      a[j] = 1;
      add(a, -5, 1);
      add(a, 5, -1);
    }
    std::vector<mpq_class> c(r.continuous);
    mpq_class offset = 0;
    for (const auto& t : m.objective()) {
      if (t.var < r.continuous) {
        c[t.var] = t.coef.raw();
      } else {
        offset += t.coef.raw() * fixed[t.var - r.continuous];
      }
    }
    auto v = VertexMinimum(c, hs);
    if (!v) continue;
    const mpq_class total = *v + offset;
    if (!best || total < *best) best = total;
  }
  return best;
}

}  // namespace mmsfair::oracle

#endif  // MMSFAIR_TESTS_MIP_ORACLE_HPP_
