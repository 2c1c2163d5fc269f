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


// Linear and mixed-integer models of 3x9 max-gap negative examples, an exact
// rational LP/MIP solver, and the search for the largest MMS among them.
//
// Variables r1..r9, c1..c9, u1..u9 are the item values of R, C and U in the
// canonical grid; b is the common MMS. Every model minimizes b.

#ifndef MMSFAIR_MAXGAP_HPP_
#define MMSFAIR_MAXGAP_HPP_

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmsfair/exact.hpp"
#include "mmsfair/instance.hpp"
#include "mmsfair/structure.hpp"

namespace mmsfair {

enum class VarKind { kContinuous, kBinary };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  // Binaries always range over {0, 1}.
  std::optional<ExactNumber> lower, upper;
};

struct Term {
  int var = 0;
  ExactNumber coef;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::kGreaterEqual;
  ExactNumber rhs;
  std::string group;
};

class MixedModel {
 public:
  // Throws ArgumentError on a duplicate or empty name.
  int add_variable(const std::string& name, VarKind kind = VarKind::kContinuous,
                   std::optional<ExactNumber> lower = std::nullopt,
                   std::optional<ExactNumber> upper = std::nullopt);
  // Merges repeated variables and drops zero coefficients. Throws
  // ArgumentError on an undeclared variable or a duplicate name.
  int add_constraint(Constraint constraint);
  // Minimized.
  void set_objective(std::vector<Term> terms);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  // -1 when absent.
  int variable_index(std::string_view name) const;
  int constraint_index(std::string_view name) const;
  int count_group(std::string_view group) const;
  int binary_count() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kBudgetExhausted };
std::string_view SolveStatusName(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  // Best integral solution found (set when Optimal, possibly when budget
  // ran out).
  bool has_solution = false;
  ExactNumber objective;
  std::vector<ExactNumber> assignment;
  // Lower bound on the optimum; equals objective when Optimal.
  std::optional<ExactNumber> best_bound;
  std::uint64_t node_count = 0;
  std::uint64_t lp_pivots = 0;
  // Callback invocations that added rows, and rows added in total.
  int lazy_rounds = 0;
  int lazy_rows = 0;
  // Every LP solution on the way passed the exact primal and dual checks
  // (only set when SolveOptions::check_every_lp).
  bool lp_checks_passed = true;

  ExactNumber value(const MixedModel& model, std::string_view name) const;
};

// Called with each integral LP solution. May append variables and
// constraints to the model (never remove or edit); returns true when it did,
// in which case the solution is rejected and the node re-solved.
using LazyCallback =
    std::function<bool(MixedModel& model, const std::vector<ExactNumber>& x)>;

struct SolveOptions {
  std::uint64_t node_limit = std::uint64_t{1} << 40;
  std::optional<std::chrono::milliseconds> time_limit;
  LazyCallback lazy;
  // One JSON object per line: node open/close, incumbents, lazy rows.
  std::function<void(std::string_view)> log;
  // Runs the exact primal/dual feasibility checks after every LP.
  bool check_every_lp = false;
  // Once every binary is integral, also branch on fractional continuous
  // variables (x <= floor or x >= floor + 1).
  bool integer_continuous = false;
};

// Exact dual simplex with lowest-index pivoting, best-first branch and bound
// (bound ascending, depth descending, creation order) on the most fractional
// binary. Lazy rows join the single search tree. With a lazy callback the
// model is extended in place.
SolveResult solve(MixedModel& model, const SolveOptions& options = {});
SolveResult solve(const MixedModel& model, const SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Models.

struct RootLpStages {
  bool order = true;
  bool allocation = true;
};

// Positivity (27), MMS equalities (9), bad bundles (12), order facts (9) and
// allocation constraints (3). Throws ArgumentError for kind None.
MixedModel build_root_lp(StructureKind kind, const RootLpStages& stages = {});

struct MipConfig {
  ExactNumber order_big_m = 40;
  ExactNumber allocation_big_m = 100;
  // Preload the extra order fact e4 > e9 for crossing diagonals.
  bool preload = true;
};

// Root LP plus one selection binary and six rows for every item pair whose
// order does not follow from the known order facts.
MixedModel build_mip(StructureKind kind, const MipConfig& config = {});

// The order facts (hi, lo), canonical 0-based items, built into the models.
std::vector<std::pair<int, int>> known_order_facts(StructureKind kind,
                                                   bool preload = true);
// Pairs (i, j), i < j, that receive a selection binary.
std::vector<std::pair<int, int>> selected_order_pairs(StructureKind kind,
                                                      bool preload = true);
// Slack in the order row for agent role (0 = R, 1 = C, 2 = U) when item hi
// precedes item lo: 0 for pairs in one MMS bundle and for the exceptions,
// 1 otherwise.
int order_delta(StructureKind kind, int role, int hi, int lo);

// Adds the selected allocation rows forcing some agent to at most b-1 in the
// allocation owner[k] (canonical item k goes to role owner[k]). Agents whose
// bundle contains one of their own MMS bundles are skipped. Returns the
// number of rows added; 0 when no agent can be forced.
int add_allocation_rows(MixedModel& model, StructureKind kind,
                        const std::array<int, 9>& owner,
                        const ExactNumber& big_m = 100);

// Item values of a model solution as a goods instance (agents R, C, U).
Instance instance_from_solution(const MixedModel& model,
                                const std::vector<ExactNumber>& x);

// LP file text (objective, constraints, bounds, binaries, end). Coefficients
// with terminating decimal expansions are written as decimals; a row with
// any other coefficient is multiplied through by the least common
// denominator of its coefficients and flagged with a comment.
std::string emit_lp_file(const MixedModel& model);

// ---------------------------------------------------------------------------
// Search.

struct MaxGapOptions {
  MipConfig mip;
  // Allocation rows added per rejected candidate.
  int cuts_per_round = 10;
  SolveOptions solve;
  // Check the big-M values against the optimum and re-solve with a larger
  // order constant when the check fails.
  bool validate_big_m = true;
  // When the optimal vertex has fractional item values, look for an
  // integral instance with the same b.
  bool integral_extraction = true;
};

struct MaxGapResult {
  SolveStatus status = SolveStatus::kInfeasible;
  StructureKind kind = StructureKind::kNone;
  ExactNumber b;
  Instance instance = Instance::Empty(Mode::kGoods, 3);
  MixedModel model;
  SolveResult solve;
  // Big-M values of the final solve and whether the optimum certifies them.
  ExactNumber order_big_m, allocation_big_m;
  bool big_m_certified = false;
  int resolves = 0;
  // Exhaustive verification of the returned instance.
  bool verified_negative = false;
  bool conditions_hold = false;
  bool b_integral = false;
  bool values_integral = false;
  std::vector<std::string> notes;
};

// Minimizes b over instances with the given structure in which every
// allocation leaves some agent at most b-1. Rows for violating allocations
// are generated from each integral candidate.
MaxGapResult search_max_gap(StructureKind kind,
                            const MaxGapOptions& options = {});

}  // namespace mmsfair

#endif  // MMSFAIR_MAXGAP_HPP_
