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

#ifndef MMSFAIR_EXACT_HPP_
#define MMSFAIR_EXACT_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace mmsfair {

// Arbitrary-precision rational number, always in lowest terms with a
// positive denominator. Every value in the library (valuations, MMS values,
// LP coefficients and solutions) is an ExactNumber.
class ExactNumber {
 public:
  ExactNumber() = default;
  ExactNumber(std::int64_t v)  // NOLINT(google-explicit-constructor)
      : q_(static_cast<long>(v)) {}
  ExactNumber(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit ExactNumber(const mpz_class& v) : q_(v) {}
  explicit ExactNumber(const mpq_class& v) : q_(v) { q_.canonicalize(); }
  // Throws ArgumentError when den == 0.
  ExactNumber(const mpz_class& num, const mpz_class& den);

  // Accepts "7", "-3", "22/7", "-4/6" (normalized). Throws ParseError.
  static ExactNumber parse(std::string_view text);

  // "p/q", or just "p" when the denominator is one.
  std::string to_string() const;

  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }

  // Exact conversion when the value is an integer representable in int64.
  std::optional<std::int64_t> to_int64() const;

  ExactNumber floor() const;
  ExactNumber ceil() const;
  ExactNumber abs() const { return ExactNumber(mpq_class(::abs(q_))); }

  ExactNumber& operator+=(const ExactNumber& o) {
    q_ += o.q_;
    return *this;
  }
  ExactNumber& operator-=(const ExactNumber& o) {
    q_ -= o.q_;
    return *this;
  }
  ExactNumber& operator*=(const ExactNumber& o) {
    q_ *= o.q_;
    return *this;
  }
  // Throws ArgumentError on division by zero.
  ExactNumber& operator/=(const ExactNumber& o);

  friend ExactNumber operator+(ExactNumber a, const ExactNumber& b) {
    return a += b;
  }
  friend ExactNumber operator-(ExactNumber a, const ExactNumber& b) {
    return a -= b;
  }
  friend ExactNumber operator*(ExactNumber a, const ExactNumber& b) {
    return a *= b;
  }
  friend ExactNumber operator/(ExactNumber a, const ExactNumber& b) {
    return a /= b;
  }
  ExactNumber operator-() const { return ExactNumber(mpq_class(-q_)); }

  friend bool operator==(const ExactNumber& a, const ExactNumber& b) {
    return a.q_ == b.q_;
  }
  friend std::strong_ordering operator<=>(const ExactNumber& a,
                                          const ExactNumber& b) {
    const int c = cmp(a.q_, b.q_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactNumber& v) {
    return os << v.to_string();
  }

 private:
  mpq_class q_;
};

inline ExactNumber min(const ExactNumber& a, const ExactNumber& b) {
  return b < a ? b : a;
}
inline ExactNumber max(const ExactNumber& a, const ExactNumber& b) {
  return a < b ? b : a;
}

}  // namespace mmsfair

#endif  // MMSFAIR_EXACT_HPP_
