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


// Internal: rational number with an int64 fast path. Results that do not fit
// in 64 bits move to a shared immutable mpq_class, so arithmetic is always
// exact.

#ifndef MMSFAIR_SRC_RATIONAL_HPP_
#define MMSFAIR_SRC_RATIONAL_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include <gmpxx.h>

#include "mmsfair/exact.hpp"

namespace mmsfair::internal {

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : num_(v) {}           // NOLINT(google-explicit-constructor)
  explicit Rational(const mpq_class& q) { Assign(q); }
  explicit Rational(const ExactNumber& v) { Assign(v.raw()); }

  ExactNumber ToExact() const { return ExactNumber(ToMpq()); }
  mpq_class ToMpq() const;
  std::string ToString() const { return ToExact().to_string(); }

  bool is_big() const { return big_ != nullptr; }
  int sign() const;
  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const;
  Rational abs() const { return sign() < 0 ? -*this : *this; }
  // Largest integer <= this.
  Rational floor() const;
  // Distance to the nearest integer.
  Rational fractionality() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend int Compare(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return Compare(a, b) == 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return Compare(a, b) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return Compare(a, b) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return Compare(a, b) > 0;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return Compare(a, b) >= 0;
  }

 private:
  void Assign(const mpq_class& q);
  // Sets the value num/den (den > 0, not necessarily reduced).
  void AssignWide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

}  // namespace mmsfair::internal

#endif  // MMSFAIR_SRC_RATIONAL_HPP_
