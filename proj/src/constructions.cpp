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

#include "mmsfair/constructions.hpp"

#include <string>

#include "mmsfair/errors.hpp"

namespace mmsfair {

Instance theorem1_instance() {
  return Instance::FromIntegers(Mode::kGoods,
                                {{1, 16, 23, 26, 4, 10, 12, 19, 9},
                                 {1, 16, 22, 26, 4, 9, 13, 20, 9},
                                 {1, 15, 23, 25, 4, 10, 13, 20, 9}});
}

Instance chores_instance() {
  return Instance::FromIntegers(Mode::kChores,
                                {{6, 15, 22, 26, 10, 7, 12, 19, 12},
                                 {6, 15, 23, 26, 10, 8, 11, 18, 12},
                                 {6, 16, 22, 27, 10, 7, 11, 18, 12}});
}

int BaseMatrixLayout::item_at(int row, int col) const {
  for (int k = 0; k < items(); ++k) {
    if (positions[k] == std::pair{row, col}) return k;
  }
  return -1;
}

std::vector<int> BaseMatrixLayout::row_items(int row) const {
  std::vector<int> out;
  for (int k = 0; k < items(); ++k) {
    if (positions[k].first == row) out.push_back(k);
  }
  return out;
}

std::vector<int> BaseMatrixLayout::column_items(int col) const {
  std::vector<int> out;
  for (int k = 0; k < items(); ++k) {
    if (positions[k].second == col) out.push_back(k);
  }
  return out;
}

bool BaseMatrixLayout::is_special(int item) const {
  const auto [r, c] = positions.at(item);
  const int last = n - 1;
  return (r == last) != (c == last);
}

std::vector<std::vector<ExactNumber>> BaseMatrixLayout::dense(
    const std::vector<ExactNumber>& v) const {
  std::vector<std::vector<ExactNumber>> grid(n, std::vector<ExactNumber>(n));
  for (int k = 0; k < items(); ++k) {
    grid[positions[k].first][positions[k].second] = v.at(k);
  }
  return grid;
}

BaseMatrixLayout base_matrix(int n) {
  if (n < 4) {
    throw ArgumentError("base_matrix: n must be at least 4, got " +
                        std::to_string(n));
  }
  const std::int64_t k = n - 2;
  const std::int64_t nn = n;
  const int last = n - 1;
  BaseMatrixLayout layout;
  layout.n = n;
  layout.target = ExactNumber(nn * k * k + 1);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      std::int64_t v;
      if (r == 0 && c == 0) {
        continue;
      } else if (r == 0 && c == last) {
        v = 1;
      } else if (r == last && c == last) {
        v = k * (nn - 3);
      } else if (r == 0) {
        v = k * nn;
      } else if (r == last) {
        v = k * k + 1;
      } else if (c == 0) {
        v = k * (nn - 1);
      } else if (c == last) {
        v = k * (nn - 1) + 1;
      } else if (r == c) {
        v = k * (nn * nn - 4 * nn + 2);
      } else {
        continue;
      }
      layout.positions.emplace_back(r, c);
      layout.values.emplace_back(v);
    }
  }
  return layout;
}

namespace {

std::vector<ExactNumber> AgentValues(const BaseMatrixLayout& layout,
                                     bool row_agent) {
  const int last = layout.n - 1;
  std::vector<ExactNumber> v;
  v.reserve(layout.items());
  for (int k = 0; k < layout.items(); ++k) {
    ExactNumber x = layout.values[k] * ExactNumber(layout.n);
    const auto [r, c] = layout.positions[k];
    if (r == last && c == last) {
      x += ExactNumber(layout.n - 1);
    } else if (row_agent ? r == last : c == last) {
      x -= ExactNumber(1);
    }
    v.push_back(std::move(x));
  }
  return v;
}

}  // namespace

std::vector<ExactNumber> row_agent_values(const BaseMatrixLayout& layout) {
  return AgentValues(layout, true);
}

std::vector<ExactNumber> column_agent_values(const BaseMatrixLayout& layout) {
  return AgentValues(layout, false);
}

ExactNumber vr_vc_target(int n) {
  const std::int64_t k = n - 2;
  return ExactNumber(std::int64_t{n} * n * k * k + n);
}

Instance vr_vc_instance(int n, int num_row_agents, int num_col_agents) {
  if (num_row_agents < 2 || num_col_agents < 2 ||
      num_row_agents + num_col_agents != n) {
    throw ArgumentError(
        "vr_vc_instance: need at least two row agents and two column agents "
        "summing to n");
  }
  const BaseMatrixLayout layout = base_matrix(n);
  std::vector<std::vector<ExactNumber>> values;
  for (int i = 0; i < num_row_agents; ++i) {
    values.push_back(row_agent_values(layout));
  }
  for (int i = 0; i < num_col_agents; ++i) {
    values.push_back(column_agent_values(layout));
  }
  return Instance(Mode::kGoods, std::move(values));
}

int extended_core_size(int N) { return (N + 5) / 2; }

Instance extended_instance(int N) {
  if (N < 4) {
    throw ArgumentError("extended_instance: N must be at least 4, got " +
                        std::to_string(N));
  }
  const int n = extended_core_size(N);
  const BaseMatrixLayout layout = base_matrix(n);
  const ExactNumber aux = vr_vc_target(n);
  std::vector<ExactNumber> row = row_agent_values(layout);
  std::vector<ExactNumber> col = column_agent_values(layout);
  row.resize(row.size() + (N - n), aux);
  col.resize(col.size() + (N - n), aux);
  std::vector<std::vector<ExactNumber>> values;
  for (int i = 0; i < N; ++i) values.push_back(i < N / 2 ? row : col);
  return Instance(Mode::kGoods, std::move(values));
}

}  // namespace mmsfair
