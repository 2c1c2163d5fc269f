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

#include "integer_image.hpp"

#include <algorithm>
#include <numeric>

namespace mmsfair::internal {
namespace {

const mpz_class& Limit() {
  static const mpz_class limit = mpz_class(1) << 62;
  return limit;
}

}  // namespace

IntegerImage MakeIntegerImage(const Instance& instance,
                              std::span<const ExactNumber> extras) {
  IntegerImage image;
  mpz_class scale = 1;
  for (const auto& row : instance.values()) {
    for (const auto& v : row) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
              v.raw().get_den_mpz_t());
    }
  }
  for (const auto& e : extras) {
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), e.raw().get_den_mpz_t());
  }
  image.scale = scale;
  image.fits = true;
  image.values.assign(instance.agents(),
                      std::vector<std::int64_t>(instance.items(), 0));
  for (int i = 0; i < instance.agents() && image.fits; ++i) {
    mpz_class total = 0;
    for (int j = 0; j < instance.items(); ++j) {
      const mpq_class& q = instance.value(i, j).raw();
      const mpz_class scaled = q.get_num() * (scale / q.get_den());
      total += scaled;
      if (total > Limit()) {
        image.fits = false;
        break;
      }
      image.values[i][j] = scaled.get_si();
    }
  }
  for (const auto& e : extras) {
    if (!image.fits) break;
    const mpz_class scaled = e.raw().get_num() * (scale / e.raw().get_den());
    if (abs(scaled) > Limit()) {
      image.fits = false;
      break;
    }
    image.extras.push_back(scaled.get_si());
  }
  return image;
}

std::vector<int> ItemsByDecreasingMax(const Instance& instance) {
  std::vector<ExactNumber> best(instance.items());
  for (int j = 0; j < instance.items(); ++j) {
    for (int i = 0; i < instance.agents(); ++i) {
      best[j] = max(best[j], instance.value(i, j));
    }
  }
  std::vector<int> order(instance.items());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return best[b] < best[a]; });
  return order;
}

}  // namespace mmsfair::internal
