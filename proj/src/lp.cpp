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


#include "lp.hpp"

#include <algorithm>

#include "mmsfair/errors.hpp"

namespace mmsfair::internal {

void LpBounds::Append(const std::optional<Rational>& l,
                      const std::optional<Rational>& h) {
  has_lo.push_back(l.has_value());
  has_hi.push_back(h.has_value());
  lo.push_back(l.value_or(Rational()));
  hi.push_back(h.value_or(Rational()));
}

Rational RowActivity(const LpRow& row, const std::vector<Rational>& x) {
  Rational s;
  for (const auto& [j, a] : row.g) s += a * x[j];
  return s;
}

void ChooseStartRows(LpProblem& lp, LpBounds& bounds, const Rational& box) {
  const int first = static_cast<int>(lp.start_row.size());
  if (first >= lp.n) return;
  // Unit rows per variable, in row order.
  std::vector<std::vector<int>> unit(lp.n);
  for (int k = 0; k < static_cast<int>(lp.rows.size()); ++k) {
    const auto& g = lp.rows[k].g;
    if (g.size() == 1 && g[0].first >= first) unit[g[0].first].push_back(k);
  }
  for (int j = first; j < lp.n; ++j) {
    int row = -1;
    signed char side = 1;
    for (int k : unit[j]) {
      const int dir = lp.c[j].sign() * lp.rows[k].g[0].second.sign();
      if (bounds.equality(k) || (dir >= 0 && bounds.has_lo[k])) {
        row = k;
        side = 1;
      } else if (dir <= 0 && bounds.has_hi[k]) {
        row = k;
        side = -1;
      }
      if (row >= 0) break;
    }
    if (row < 0) {
      LpRow r;
      r.g.emplace_back(j, Rational(1));
      r.artificial = true;
      lp.rows.push_back(std::move(r));
      row = static_cast<int>(lp.rows.size()) - 1;
      if (lp.c[j].sign() < 0) {
        bounds.Append(std::nullopt, box);
        side = -1;
      } else {
        bounds.Append(-box, std::nullopt);
        side = 1;
      }
    }
    lp.start_row.push_back(row);
    lp.start_side.push_back(side);
  }
}

LpState StartState(const LpProblem& lp, const LpBounds& bounds) {
  LpState s;
  s.n = lp.n;
  s.active = lp.start_row;
  s.side = lp.start_side;
  Refactor(lp, bounds, s);
  return s;
}

namespace {

const Rational& Beta(const LpBounds& b, int row, signed char side) {
  return side > 0 ? b.lo[row] : b.hi[row];
}

void ComputeXY(const LpProblem& lp, const LpBounds& bounds, LpState& s) {
  const int n = s.n;
  s.x.assign(n, Rational());
  s.y.assign(n, Rational());
  for (int t = 0; t < n; ++t) {
    const Rational& beta = Beta(bounds, s.active[t], s.side[t]);
    Rational yt;
    for (int j = 0; j < n; ++j) {
      const Rational& v = s.X[t * n + j];
      if (v.is_zero()) continue;
      if (!beta.is_zero()) s.x[j] += beta * v;
      if (!lp.c[j].is_zero()) yt += lp.c[j] * v;
    }
    s.y[t] = yt;
  }
}

}  // namespace

void Refactor(const LpProblem& lp, const LpBounds& bounds, LpState& s) {
  const int n = lp.n;
  s.n = n;
  if (static_cast<int>(s.active.size()) != n) {
    throw ArgumentError("Refactor: basis size mismatch");
  }
  s.position.assign(lp.rows.size(), -1);
  for (int t = 0; t < n; ++t) s.position[s.active[t]] = t;

  // Unit rows pin their variable; the rest form a square system over the
  // remaining variables.
  std::vector<int> pinned_by(n, -1);
  std::vector<int> general;
  for (int t = 0; t < n; ++t) {
    const auto& g = lp.rows[s.active[t]].g;
    if (g.size() == 1 && pinned_by[g[0].first] < 0) {
      pinned_by[g[0].first] = t;
    } else {
      general.push_back(t);
    }
  }
  std::vector<int> free_vars, free_index(n, -1);
  for (int j = 0; j < n; ++j) {
    if (pinned_by[j] < 0) {
      free_index[j] = static_cast<int>(free_vars.size());
      free_vars.push_back(j);
    }
  }
  const int k = static_cast<int>(general.size());
  if (k != static_cast<int>(free_vars.size())) {
    throw ArgumentError("Refactor: singular basis");
  }
  // Gauss-Jordan on [A_NF | I].
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(2 * k));
  for (int r = 0; r < k; ++r) {
    for (const auto& [j, v] : lp.rows[s.active[general[r]]].g) {
      if (free_index[j] >= 0) a[r][free_index[j]] = v;
    }
    a[r][k + r] = 1;
  }
  for (int col = 0; col < k; ++col) {
    int piv = -1;
    for (int r = col; r < k; ++r) {
      if (!a[r][col].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw ArgumentError("Refactor: singular basis");
    std::swap(a[piv], a[col]);
    const Rational inv = Rational(1) / a[col][col];
    for (int c = col; c < 2 * k; ++c) {
      if (!a[col][c].is_zero()) a[col][c] *= inv;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rational f = a[r][col];
      for (int c = col; c < 2 * k; ++c) {
        if (!a[col][c].is_zero()) a[r][c] -= f * a[col][c];
      }
    }
  }
  // inv[f][r]: entry of A_NF^{-1} for free variable f and general row r.
  auto inv = [&](int f, int r) -> const Rational& { return a[f][k + r]; };

  s.X.assign(static_cast<std::size_t>(n) * n, Rational());
  for (int r = 0; r < k; ++r) {
    const int t = general[r];
    for (int f = 0; f < k; ++f) s.X[t * n + free_vars[f]] = inv(f, r);
  }
  // Coefficients of pinned variables inside the general rows.
  std::vector<std::vector<std::pair<int, Rational>>> pinned_col(n);
  for (int r = 0; r < k; ++r) {
    for (const auto& [j, v] : lp.rows[s.active[general[r]]].g) {
      if (pinned_by[j] >= 0) pinned_col[j].emplace_back(r, v);
    }
  }
  for (int j = 0; j < n; ++j) {
    const int t = pinned_by[j];
    if (t < 0) continue;
    const Rational unit = Rational(1) / lp.rows[s.active[t]].g[0].second;
    s.X[t * n + j] = unit;
    for (int f = 0; f < k; ++f) {
      Rational acc;
      for (const auto& [r, v] : pinned_col[j]) {
        const Rational& e = inv(f, r);
        if (!e.is_zero()) acc += e * v;
      }
      if (!acc.is_zero()) s.X[t * n + free_vars[f]] = -(acc * unit);
    }
  }
  ComputeXY(lp, bounds, s);
}

void PadState(const LpProblem& lp, const LpBounds& bounds, LpState& s) {
  const int old_n = s.n;
  const int n = lp.n;
  if (n == old_n) {
    s.position.resize(lp.rows.size(), -1);
    return;
  }
  std::vector<Rational> X(static_cast<std::size_t>(n) * n);
  for (int t = 0; t < old_n; ++t) {
    std::copy(s.X.begin() + static_cast<std::ptrdiff_t>(t) * old_n,
              s.X.begin() + static_cast<std::ptrdiff_t>(t + 1) * old_n,
              X.begin() + static_cast<std::ptrdiff_t>(t) * n);
  }
  s.X = std::move(X);
  s.n = n;
  s.position.resize(lp.rows.size(), -1);
  s.x.resize(n);
  s.y.resize(n);
  for (int j = old_n; j < n; ++j) {
    const int row = lp.start_row[j];
    const auto& g = lp.rows[row].g;
    if (g.size() != 1 || g[0].first != j) {
      throw ArgumentError("PadState: start row is not a unit row");
    }
    const Rational unit = Rational(1) / g[0].second;
    s.active.push_back(row);
    s.side.push_back(lp.start_side[j]);
    s.position[row] = j;
    s.X[j * n + j] = unit;
    s.x[j] = Beta(bounds, row, lp.start_side[j]) * unit;
    s.y[j] = lp.c[j] * unit;
  }
}

LpOutcome DualSimplex(const LpProblem& lp, const LpBounds& bounds,
                      LpState& s) {
  LpOutcome out;
  const int n = s.n;
  const int rows = static_cast<int>(lp.rows.size());
  s.position.resize(rows, -1);
  std::vector<Rational> w(n);
  std::vector<int> nz;
  for (;;) {
    int k = -1;
    signed char sigma = 0;
    Rational activity;
    for (int r = 0; r < rows; ++r) {
      if (s.position[r] >= 0) continue;
      activity = RowActivity(lp.rows[r], s.x);
      if (bounds.has_lo[r] && activity < bounds.lo[r]) {
        k = r;
        sigma = 1;
        break;
      }
      if (bounds.has_hi[r] && activity > bounds.hi[r]) {
        k = r;
        sigma = -1;
        break;
      }
    }
    if (k < 0) return out;

    const auto& g = lp.rows[k].g;
    for (int t = 0; t < n; ++t) {
      Rational acc;
      for (const auto& [j, a] : g) {
        const Rational& v = s.X[t * n + j];
        if (!v.is_zero()) acc += a * v;
      }
      w[t] = acc;
    }
    int p = -1;
    Rational best;
    for (int t = 0; t < n; ++t) {
      if (w[t].is_zero()) continue;
      const int row = s.active[t];
      if (bounds.equality(row)) continue;
      if (sigma * s.side[t] * w[t].sign() <= 0) continue;
      const Rational ratio = s.y[t] / (sigma > 0 ? w[t] : -w[t]);
      if (p < 0 || ratio < best || (ratio == best && row < s.active[p])) {
        p = t;
        best = ratio;
      }
    }
    if (p < 0) {
      out.status = LpStatus::kInfeasible;
      for (int t = 0; t < n; ++t) {
        if (!w[t].is_zero() && lp.rows[s.active[t]].artificial) {
          out.artificial_in_proof = true;
        }
      }
      return out;
    }
    ++out.pivots;

    const Rational& beta = sigma > 0 ? bounds.lo[k] : bounds.hi[k];
    const Rational wp = w[p];
    const Rational step = (beta - activity) / wp;
    nz.clear();
    for (int j = 0; j < n; ++j) {
      Rational& v = s.X[p * n + j];
      if (v.is_zero()) continue;
      s.x[j] += step * v;
      v /= wp;
      nz.push_back(j);
    }
    for (int t = 0; t < n; ++t) {
      if (t == p || w[t].is_zero()) continue;
      const Rational f = w[t];
      for (int j : nz) s.X[t * n + j] -= f * s.X[p * n + j];
    }
    const Rational yk = s.y[p] / wp;
    for (int t = 0; t < n; ++t) {
      if (t == p || w[t].is_zero()) continue;
      s.y[t] -= yk * w[t];
    }
    s.y[p] = yk;
    s.position[s.active[p]] = -1;
    s.active[p] = k;
    s.side[p] = sigma;
    s.position[k] = p;
  }
}

bool PrimalFeasible(const LpProblem& lp, const LpBounds& bounds,
                    const LpState& s) {
  for (int r = 0; r < static_cast<int>(lp.rows.size()); ++r) {
    const Rational a = RowActivity(lp.rows[r], s.x);
    if (bounds.has_lo[r] && a < bounds.lo[r]) return false;
    if (bounds.has_hi[r] && a > bounds.hi[r]) return false;
  }
  for (int t = 0; t < s.n; ++t) {
    const int r = s.active[t];
    const Rational a = RowActivity(lp.rows[r], s.x);
    if (a != (s.side[t] > 0 ? bounds.lo[r] : bounds.hi[r])) return false;
  }
  return true;
}

bool DualFeasible(const LpProblem& lp, const LpBounds& bounds,
                  const LpState& s) {
  // c == sum_t y_t g_t and the sign conditions.
  std::vector<Rational> acc(s.n);
  for (int t = 0; t < s.n; ++t) {
    const int r = s.active[t];
    if (!bounds.equality(r) && s.side[t] * s.y[t].sign() < 0) return false;
    for (const auto& [j, a] : lp.rows[r].g) acc[j] += s.y[t] * a;
  }
  for (int j = 0; j < s.n; ++j) {
    if (acc[j] != lp.c[j]) return false;
  }
  return true;
}

Rational Objective(const LpProblem& lp, const LpState& s) {
  Rational v;
  for (int j = 0; j < s.n; ++j) {
    if (!lp.c[j].is_zero()) v += lp.c[j] * s.x[j];
  }
  return v;
}

}  // namespace mmsfair::internal
