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

// Internal: exact integer image of a rational instance for the hot loops.

#ifndef MMSFAIR_SRC_INTEGER_IMAGE_HPP_
#define MMSFAIR_SRC_INTEGER_IMAGE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "mmsfair/exact.hpp"
#include "mmsfair/instance.hpp"

namespace mmsfair::internal {

// values * scale, where scale is the lcm of all denominators involved.
// `fits` is false when some agent's scaled total, or some extra, exceeds
// 2^62; callers then fall back to ExactNumber arithmetic.
struct IntegerImage {
  bool fits = false;
  mpz_class scale = 1;
  std::vector<std::vector<std::int64_t>> values;
  std::vector<std::int64_t> extras;
};

IntegerImage MakeIntegerImage(const Instance& instance,
                              std::span<const ExactNumber> extras);

inline __int128 Wide(std::int64_t a, std::int64_t b) {
  return static_cast<__int128>(a) * b;
}
inline ExactNumber Wide(const ExactNumber& a, const ExactNumber& b) {
  return a * b;
}

inline std::int64_t ZeroOf(std::int64_t) { return 0; }
inline ExactNumber ZeroOf(const ExactNumber&) { return ExactNumber(); }

// Items sorted by decreasing maximum value across agents, ties by index.
std::vector<int> ItemsByDecreasingMax(const Instance& instance);

}  // namespace mmsfair::internal

#endif  // MMSFAIR_SRC_INTEGER_IMAGE_HPP_
