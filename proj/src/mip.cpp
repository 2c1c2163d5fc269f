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


#include <algorithm>
#include <chrono>
#include <map>
#include <queue>

#include <json.hpp>

#include "lp.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/maxgap.hpp"
#include "rational.hpp"

namespace mmsfair {

using internal::LpBounds;
using internal::LpOutcome;
using internal::LpProblem;
using internal::LpRow;
using internal::LpState;
using internal::LpStatus;
using internal::Rational;

int MixedModel::add_variable(const std::string& name, VarKind kind,
                             std::optional<ExactNumber> lower,
                             std::optional<ExactNumber> upper) {
  if (name.empty()) throw ArgumentError("add_variable: empty name");
  if (variable_index(name) >= 0) {
    throw ArgumentError("add_variable: duplicate variable '" + name + "'");
  }
  if (kind == VarKind::kBinary) {
    lower = ExactNumber(0);
    upper = ExactNumber(1);
  }
  variables_.push_back(Variable{name, kind, std::move(lower), std::move(upper)});
  return static_cast<int>(variables_.size()) - 1;
}

namespace {

std::vector<Term> Normalize(std::vector<Term> terms, int num_vars,
                            const std::string& where) {
  std::map<int, ExactNumber> merged;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_vars) {
      throw ArgumentError(where + ": undeclared variable " +
                          std::to_string(t.var));
    }
    merged[t.var] += t.coef;
  }
  std::vector<Term> out;
  for (auto& [v, c] : merged) {
    if (!c.is_zero()) out.push_back(Term{v, c});
  }
  return out;
}

}  // namespace

int MixedModel::add_constraint(Constraint constraint) {
  if (constraint.name.empty()) {
    constraint.name = "c" + std::to_string(constraints_.size());
  }
  if (constraint_index(constraint.name) >= 0) {
    throw ArgumentError("add_constraint: duplicate constraint '" +
                        constraint.name + "'");
  }
  constraint.terms =
      Normalize(std::move(constraint.terms),
                static_cast<int>(variables_.size()),
                "add_constraint '" + constraint.name + "'");
  constraints_.push_back(std::move(constraint));
  return static_cast<int>(constraints_.size()) - 1;
}

void MixedModel::set_objective(std::vector<Term> terms) {
  objective_ = Normalize(std::move(terms),
                         static_cast<int>(variables_.size()), "set_objective");
}

int MixedModel::variable_index(std::string_view name) const {
  for (int j = 0; j < static_cast<int>(variables_.size()); ++j) {
    if (variables_[j].name == name) return j;
  }
  return -1;
}

int MixedModel::constraint_index(std::string_view name) const {
  for (int k = 0; k < static_cast<int>(constraints_.size()); ++k) {
    if (constraints_[k].name == name) return k;
  }
  return -1;
}

int MixedModel::count_group(std::string_view group) const {
  return static_cast<int>(
      std::count_if(constraints_.begin(), constraints_.end(),
                    [&](const Constraint& c) { return c.group == group; }));
}

int MixedModel::binary_count() const {
  return static_cast<int>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
        return v.kind == VarKind::kBinary;
      }));
}

std::string_view SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kBudgetExhausted:
      break;
  }
  return "budget_exhausted";
}

ExactNumber SolveResult::value(const MixedModel& model,
                               std::string_view name) const {
  const int j = model.variable_index(name);
  if (j < 0 || j >= static_cast<int>(assignment.size())) {
    throw ArgumentError("SolveResult::value: unknown variable '" +
                        std::string(name) + "'");
  }
  return assignment[j];
}

namespace {

using nlohmann::json;

// Thrown to restart the search with a larger artificial box.
struct EnlargeBox {};

struct Fixing {
  int var;
  int dir;  // 0 fixes the value, -1 sets an upper bound, +1 a lower bound
  Rational value;
};

struct Node {
  std::uint64_t id = 0;
  int depth = 0;
  Rational bound;
  std::vector<Fixing> fixings;
  std::vector<int> active;
  std::vector<signed char> side;
};

struct NodeOrder {
  bool operator()(const Node* a, const Node* b) const {
    // priority_queue pops the largest; invert.
    const int c = Compare(a->bound, b->bound);
    if (c != 0) return c > 0;
    if (a->depth != b->depth) return a->depth < b->depth;
    return a->id > b->id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(MixedModel& model, const SolveOptions& options,
                 const Rational& box)
      : model_(model), options_(options), box_(box) {
    start_ = std::chrono::steady_clock::now();
  }

  SolveResult Run();

 private:
  void Sync();
  LpBounds EffectiveBounds(const std::vector<Fixing>& fixings) const;
  LpOutcome Solve(const LpBounds& bounds, LpState& state);
  // Returns the branching variable or -1 when every binary is integral.
  int BranchVariable(const LpState& state) const;
  bool BudgetLeft() const;
  void Log(json event) const;
  bool ArtificialBinding(const LpBounds& bounds, const LpState& state) const;
  bool HasRay() const;
  LpState StateFor(const Node& node, const LpBounds& bounds);
  void Remember(std::uint64_t id, LpState state);

  MixedModel& model_;
  const SolveOptions& options_;
  Rational box_;
  std::chrono::steady_clock::time_point start_;

  LpProblem lp_;
  LpBounds base_;
  std::vector<int> bound_row_;  // per variable, -1 when none
  std::vector<char> binary_;
  int synced_vars_ = 0;
  int synced_constraints_ = 0;

  SolveResult result_;
  bool has_incumbent_ = false;
  Rational incumbent_;
  std::uint64_t next_id_ = 0;

  std::map<std::uint64_t, LpState> cache_;
};

void BranchAndBound::Sync() {
  const auto& vars = model_.variables();
  const auto& cons = model_.constraints();
  for (int j = synced_vars_; j < static_cast<int>(vars.size()); ++j) {
    const Variable& v = vars[j];
    lp_.n = j + 1;
    lp_.c.emplace_back();
    binary_.push_back(v.kind == VarKind::kBinary);
    bound_row_.push_back(-1);
    if (v.lower || v.upper || options_.integer_continuous) {
      LpRow row;
      row.g.emplace_back(j, Rational(1));
      lp_.rows.push_back(std::move(row));
      base_.Append(v.lower ? std::optional<Rational>(Rational(*v.lower))
                           : std::nullopt,
                   v.upper ? std::optional<Rational>(Rational(*v.upper))
                           : std::nullopt);
      bound_row_[j] = static_cast<int>(lp_.rows.size()) - 1;
    }
  }
  if (synced_vars_ == 0) {
    for (const auto& t : model_.objective()) lp_.c[t.var] = Rational(t.coef);
  }
  for (int k = synced_constraints_; k < static_cast<int>(cons.size()); ++k) {
    const Constraint& c = cons[k];
    LpRow row;
    for (const auto& t : c.terms) row.g.emplace_back(t.var, Rational(t.coef));
    std::sort(row.g.begin(), row.g.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    lp_.rows.push_back(std::move(row));
    const Rational rhs(c.rhs);
    base_.Append(c.relation == Relation::kLessEqual ? std::nullopt
                                                    : std::optional(rhs),
                 c.relation == Relation::kGreaterEqual ? std::nullopt
                                                       : std::optional(rhs));
  }
  synced_vars_ = static_cast<int>(vars.size());
  synced_constraints_ = static_cast<int>(cons.size());
  internal::ChooseStartRows(lp_, base_, box_);
}

LpBounds BranchAndBound::EffectiveBounds(
    const std::vector<Fixing>& fixings) const {
  LpBounds b = base_;
  for (const auto& f : fixings) {
    const int r = bound_row_[f.var];
    if (f.dir <= 0 && (!b.has_hi[r] || f.value < b.hi[r])) {
      b.has_hi[r] = 1;
      b.hi[r] = f.value;
    }
    if (f.dir >= 0 && (!b.has_lo[r] || f.value > b.lo[r])) {
      b.has_lo[r] = 1;
      b.lo[r] = f.value;
    }
  }
  return b;
}

LpOutcome BranchAndBound::Solve(const LpBounds& bounds, LpState& state) {
  LpOutcome o = internal::DualSimplex(lp_, bounds, state);
  result_.lp_pivots += o.pivots;
  if (o.status == LpStatus::kInfeasible && o.artificial_in_proof) {
    throw EnlargeBox{};
  }
  if (options_.check_every_lp && o.status == LpStatus::kOptimal) {
    if (!internal::PrimalFeasible(lp_, bounds, state) ||
        !internal::DualFeasible(lp_, bounds, state)) {
      result_.lp_checks_passed = false;
    }
  }
  return o;
}

int BranchAndBound::BranchVariable(const LpState& state) const {
  for (bool binaries : {true, false}) {
    if (!binaries && !options_.integer_continuous) break;
    int best = -1;
    Rational best_frac;
    for (int j = 0; j < lp_.n; ++j) {
      if (static_cast<bool>(binary_[j]) != binaries) continue;
      if (state.x[j].is_integer()) continue;
      const Rational f = state.x[j].fractionality();
      if (best < 0 || f > best_frac) {
        best = j;
        best_frac = f;
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

bool BranchAndBound::BudgetLeft() const {
  if (result_.node_count >= options_.node_limit) return false;
  if (options_.time_limit) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    if (elapsed > *options_.time_limit) return false;
  }
  return true;
}

void BranchAndBound::Log(json event) const {
  if (options_.log) options_.log(event.dump());
}

bool BranchAndBound::ArtificialBinding(const LpBounds&,
                                       const LpState& state) const {
  for (int t = 0; t < state.n; ++t) {
    if (lp_.rows[state.active[t]].artificial && !state.y[t].is_zero()) {
      return true;
    }
  }
  return false;
}

// Is there a direction d with c.d < 0 that keeps every real row feasible?
bool BranchAndBound::HasRay() const {
  LpProblem ray;
  ray.n = lp_.n;
  ray.c = lp_.c;
  LpBounds b;
  for (int r = 0; r < static_cast<int>(lp_.rows.size()); ++r) {
    if (lp_.rows[r].artificial) continue;
    ray.rows.push_back(lp_.rows[r]);
    b.Append(base_.has_lo[r] ? std::optional<Rational>(Rational())
                             : std::nullopt,
             base_.has_hi[r] ? std::optional<Rational>(Rational())
                             : std::nullopt);
  }
  for (int j = 0; j < lp_.n; ++j) {
    LpRow row;
    row.g.emplace_back(j, Rational(1));
    ray.rows.push_back(std::move(row));
    b.Append(Rational(-1), Rational(1));
    ray.start_row.push_back(static_cast<int>(ray.rows.size()) - 1);
    ray.start_side.push_back(lp_.c[j].sign() < 0 ? -1 : 1);
  }
  LpState s = internal::StartState(ray, b);
  const LpOutcome o = internal::DualSimplex(ray, b, s);
  return o.status == LpStatus::kOptimal && internal::Objective(ray, s).sign() < 0;
}

LpState BranchAndBound::StateFor(const Node& node, const LpBounds& bounds) {
  auto it = cache_.find(node.id);
  if (it != cache_.end()) {
    LpState s = std::move(it->second);
    cache_.erase(it);
    internal::PadState(lp_, bounds, s);
    return s;
  }
  LpState s;
  s.active = node.active;
  s.side = node.side;
  for (int j = static_cast<int>(s.active.size()); j < lp_.n; ++j) {
    s.active.push_back(lp_.start_row[j]);
    s.side.push_back(lp_.start_side[j]);
  }
  internal::Refactor(lp_, bounds, s);
  return s;
}

void BranchAndBound::Remember(std::uint64_t id, LpState state) {
  constexpr std::size_t kCapacity = 24;
  cache_.emplace(id, std::move(state));
  while (cache_.size() > kCapacity) cache_.erase(cache_.begin());
}

SolveResult BranchAndBound::Run() {
  Sync();
  std::vector<std::unique_ptr<Node>> storage;
  std::priority_queue<Node*, std::vector<Node*>, NodeOrder> open;

  auto root = std::make_unique<Node>();
  root->id = next_id_++;
  {
    const LpState s = internal::StartState(lp_, base_);
    root->active = s.active;
    root->side = s.side;
    Remember(root->id, s);
  }
  open.push(root.get());
  storage.push_back(std::move(root));
  bool root_done = false;
  bool exhausted = false;

  while (!open.empty()) {
    Node* node = open.top();
    if (has_incumbent_ && node->bound >= incumbent_) {
      open.pop();
      cache_.erase(node->id);
      continue;
    }
    if (!BudgetLeft()) {
      exhausted = true;
      break;
    }
    open.pop();
    ++result_.node_count;
    LpBounds bounds = EffectiveBounds(node->fixings);
    LpState state = StateFor(*node, bounds);
    Log({{"event", "node_open"},
         {"node", node->id},
         {"depth", node->depth},
         {"bound", node->bound.ToString()}});

    int branch = -1;
    Rational value;
    for (;;) {
      const LpOutcome o = Solve(bounds, state);
      if (o.status == LpStatus::kInfeasible) break;
      value = internal::Objective(lp_, state);
      if (!root_done) {
        root_done = true;
        if (ArtificialBinding(bounds, state)) {
          if (HasRay()) {
            result_.status = SolveStatus::kUnbounded;
            return result_;
          }
          throw EnlargeBox{};
        }
      }
      if (has_incumbent_ && value >= incumbent_) break;
      branch = BranchVariable(state);
      if (branch >= 0) break;
      if (ArtificialBinding(bounds, state)) throw EnlargeBox{};
      if (options_.lazy) {
        std::vector<ExactNumber> x;
        x.reserve(lp_.n);
        for (const auto& v : state.x) x.push_back(v.ToExact());
        const int before = static_cast<int>(model_.constraints().size());
        if (options_.lazy(model_, x)) {
          ++result_.lazy_rounds;
          const int added = static_cast<int>(model_.constraints().size()) - before;
          result_.lazy_rows += added;
          Log({{"event", "lazy_rows"}, {"node", node->id}, {"rows", added}});
          Sync();
          bounds = EffectiveBounds(node->fixings);
          internal::PadState(lp_, bounds, state);
          continue;
        }
      }
      has_incumbent_ = true;
      incumbent_ = value;
      result_.has_solution = true;
      result_.objective = value.ToExact();
      result_.assignment.clear();
      for (const auto& v : state.x) result_.assignment.push_back(v.ToExact());
      Log({{"event", "incumbent"},
           {"node", node->id},
           {"objective", result_.objective.to_string()}});
      break;
    }
    if (branch < 0) {
      Log({{"event", "node_close"}, {"node", node->id}});
      continue;
    }
    const Rational down = state.x[branch].floor();
    for (int up : {0, 1}) {
      auto child = std::make_unique<Node>();
      child->id = next_id_++;
      child->depth = node->depth + 1;
      child->fixings = node->fixings;
      if (binary_[branch]) {
        child->fixings.push_back(Fixing{branch, 0, Rational(up)});
      } else {
        child->fixings.push_back(
            Fixing{branch, up ? 1 : -1, up ? down + Rational(1) : down});
      }
      const LpBounds cb = EffectiveBounds(child->fixings);
      LpState cs = state;
      const LpOutcome o = Solve(cb, cs);
      if (o.status == LpStatus::kInfeasible) continue;
      child->bound = internal::Objective(lp_, cs);
      if (has_incumbent_ && child->bound >= incumbent_) continue;
      child->active = cs.active;
      child->side = cs.side;
      Remember(child->id, std::move(cs));
      open.push(child.get());
      storage.push_back(std::move(child));
    }
    Log({{"event", "node_close"},
         {"node", node->id},
         {"branch", model_.variables()[branch].name}});
  }

  if (exhausted) {
    result_.status = SolveStatus::kBudgetExhausted;
    Rational bound = open.top()->bound;
    if (has_incumbent_ && incumbent_ < bound) bound = incumbent_;
    result_.best_bound = bound.ToExact();
  } else if (has_incumbent_) {
    result_.status = SolveStatus::kOptimal;
    result_.best_bound = result_.objective;
  } else {
    result_.status = SolveStatus::kInfeasible;
  }
  Log({{"event", "done"},
       {"status", std::string(SolveStatusName(result_.status))},
       {"nodes", result_.node_count}});
  return result_;
}

}  // namespace

SolveResult solve(MixedModel& model, const SolveOptions& options) {
  Rational box(std::int64_t{1} << 30);
  for (int attempt = 0; attempt < 6; ++attempt) {
    // Lazy rows added before a restart stay in the model; they hold for
    // every solution.
    try {
      BranchAndBound bb(model, options, box);
      return bb.Run();
    } catch (const EnlargeBox&) {
      box *= Rational(std::int64_t{1} << 30);
    }
  }
  throw CapacityError("solve: artificial bounds kept binding");
}

SolveResult solve(const MixedModel& model, const SolveOptions& options) {
  MixedModel copy = model;
  return solve(copy, options);
}

}  // namespace mmsfair
