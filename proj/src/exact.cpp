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

#include "mmsfair/exact.hpp"

#include <cctype>

#include "mmsfair/errors.hpp"

namespace mmsfair {
namespace {

bool IsIntegerLiteral(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class ParseInteger(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

ExactNumber::ExactNumber(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ArgumentError("ExactNumber: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

ExactNumber ExactNumber::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!IsIntegerLiteral(text)) {
      throw ParseError("not an exact number: '" + std::string(text) + "'");
    }
    return ExactNumber(ParseInteger(text));
  }
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  if (!IsIntegerLiteral(num) || !IsIntegerLiteral(den) || den.front() == '-' ||
      den.front() == '+') {
    throw ParseError("not an exact rational: '" + std::string(text) + "'");
  }
  const mpz_class d = ParseInteger(den);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return ExactNumber(ParseInteger(num), d);
}

std::string ExactNumber::to_string() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::optional<std::int64_t> ExactNumber::to_int64() const {
  if (!is_integer() || !q_.get_num().fits_slong_p()) return std::nullopt;
  return static_cast<std::int64_t>(q_.get_num().get_si());
}

ExactNumber ExactNumber::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return ExactNumber(r);
}

ExactNumber ExactNumber::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return ExactNumber(r);
}

ExactNumber& ExactNumber::operator/=(const ExactNumber& o) {
  if (o.is_zero()) throw ArgumentError("ExactNumber: division by zero");
  q_ /= o.q_;
  return *this;
}

}  // namespace mmsfair
