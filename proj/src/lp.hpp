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


// Internal: exact bounded dual simplex.
//
// Every constraint is a row lo <= g.x <= hi with either side optional;
// variable bounds are unit rows like any other. A basis is a set of n active
// rows, each held at one side, whose coefficient vectors are linearly
// independent. The state keeps X = G_S^{-1} column by column, the primal
// point x = X beta and the duals y = c X. The objective is minimized, so a
// basis is dual feasible when y >= 0 on rows held at lo and y <= 0 on rows
// held at hi (rows with lo == hi are free).
//
// Pivots use the lowest-index violated row and the lowest-index row among
// ratio-test ties, which rules out cycling.

#ifndef MMSFAIR_SRC_LP_HPP_
#define MMSFAIR_SRC_LP_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace mmsfair::internal {

struct LpRow {
  std::vector<std::pair<int, Rational>> g;  // sorted by variable
  // Artificial box rows exist only to start the dual simplex.
  bool artificial = false;
};

struct LpBounds {
  std::vector<char> has_lo, has_hi;
  std::vector<Rational> lo, hi;

  int size() const { return static_cast<int>(lo.size()); }
  void Append(const std::optional<Rational>& l,
              const std::optional<Rational>& h);
  bool equality(int k) const {
    return has_lo[k] && has_hi[k] && lo[k] == hi[k];
  }
};

struct LpProblem {
  int n = 0;
  std::vector<Rational> c;
  std::vector<LpRow> rows;
  // Row used to put variable j into a fresh basis, and its side.
  std::vector<int> start_row;
  std::vector<signed char> start_side;
};

struct LpState {
  int n = 0;
  std::vector<int> active;          // position -> row
  std::vector<signed char> side;    // +1 held at lo, -1 held at hi
  std::vector<Rational> X;          // column t is X[t * n .. t * n + n)
  std::vector<Rational> x;
  std::vector<Rational> y;          // per position
  std::vector<int> position;        // row -> position or -1

  const Rational& Xat(int t, int j) const { return X[t * n + j]; }
};

enum class LpStatus { kOptimal, kInfeasible };

struct LpOutcome {
  LpStatus status = LpStatus::kOptimal;
  // Infeasibility certificate leans on an artificial row; the verdict may be
  // an artefact of the box.
  bool artificial_in_proof = false;
  std::uint64_t pivots = 0;
};

// Adds artificial rows for variables that lack a usable start row. Call
// after the problem's rows and bounds are complete.
void ChooseStartRows(LpProblem& lp, LpBounds& bounds, const Rational& box);

// A fresh basis made of the start rows.
LpState StartState(const LpProblem& lp, const LpBounds& bounds);

// Rebuilds X, x and y for the given active rows and sides.
void Refactor(const LpProblem& lp, const LpBounds& bounds, LpState& state);

// Extends a state after variables were appended: each new variable's start
// row joins the basis.
void PadState(const LpProblem& lp, const LpBounds& bounds, LpState& state);

// Runs dual simplex pivots from a dual feasible state.
LpOutcome DualSimplex(const LpProblem& lp, const LpBounds& bounds,
                      LpState& state);

Rational RowActivity(const LpRow& row, const std::vector<Rational>& x);

// Exact checks of the current basis.
bool PrimalFeasible(const LpProblem& lp, const LpBounds& bounds,
                    const LpState& state);
bool DualFeasible(const LpProblem& lp, const LpBounds& bounds,
                  const LpState& state);

Rational Objective(const LpProblem& lp, const LpState& state);

}  // namespace mmsfair::internal

#endif  // MMSFAIR_SRC_LP_HPP_
