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

// Generators for the negative examples: the 3x9 goods and chores instances
// and the n x n base-matrix family with its row/column agents.
//
// The nine items of a 3x9 instance are the cells of a 3x3 grid in row-major
// order, so item k is e_{k+1}.

#ifndef MMSFAIR_CONSTRUCTIONS_HPP_
#define MMSFAIR_CONSTRUCTIONS_HPP_

#include <utility>
#include <vector>

#include "mmsfair/exact.hpp"
#include "mmsfair/instance.hpp"

namespace mmsfair {

// Goods; agents R, C, U. Every MMS is 40 and no allocation gives all three
// agents 40.
Instance theorem1_instance();

// Chores; agents R, C, U. Every MMS is 43 and every allocation leaves some
// agent with dis-utility at least 44.
Instance chores_instance();

// The n x n base matrix. Cells are 0-based (row, col). Item k of the flat
// instance is positions[k]; positions are listed in row-major order.
struct BaseMatrixLayout {
  int n = 0;
  std::vector<std::pair<int, int>> positions;
  std::vector<ExactNumber> values;
  // Common row and column sum n(n-2)^2 + 1.
  ExactNumber target;

  int items() const { return static_cast<int>(positions.size()); }
  // Item index at (row, col), or -1 when the cell is empty.
  int item_at(int row, int col) const;
  // Items of a row / column, in increasing index order.
  std::vector<int> row_items(int row) const;
  std::vector<int> column_items(int col) const;
  // Bottom row and right column minus the bottom-right corner.
  bool is_special(int item) const;
  // Dense n x n matrix with zeros in empty cells.
  std::vector<std::vector<ExactNumber>> dense(
      const std::vector<ExactNumber>& values) const;
};

// Throws ArgumentError when n < 4.
BaseMatrixLayout base_matrix(int n);

// Valuations of a row agent (V_R) and a column agent (V_C) over the layout's
// items: n*B with one unit moved from every special item of the bottom row
// (resp. right column) to the bottom-right corner.
std::vector<ExactNumber> row_agent_values(const BaseMatrixLayout& layout);
std::vector<ExactNumber> column_agent_values(const BaseMatrixLayout& layout);

// t_V = n * t_B = n^2(n-2)^2 + n.
ExactNumber vr_vc_target(int n);

// num_row_agents V_R agents followed by num_col_agents V_C agents. Requires
// both counts >= 2 and their sum == n; throws ArgumentError otherwise.
Instance vr_vc_instance(int n, int num_row_agents, int num_col_agents);

// N agents. For N <= 5 this is vr_vc_instance(N, N/2, N - N/2). Otherwise the
// core uses n = ceil((N+4)/2) and N - n auxiliary items worth t_V to every
// agent are appended; the first floor(N/2) agents are row agents.
// N + 4n - 7 items. Throws ArgumentError when N < 4.
Instance extended_instance(int N);

// Base-matrix size used by extended_instance(N).
int extended_core_size(int N);

}  // namespace mmsfair

#endif  // MMSFAIR_CONSTRUCTIONS_HPP_
