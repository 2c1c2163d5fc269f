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


#include "rational.hpp"

#include <limits>
#include <numeric>

#include "mmsfair/errors.hpp"

namespace mmsfair::internal {
namespace {

using u128 = unsigned __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

u128 Abs(__int128 v) { return v < 0 ? -static_cast<u128>(v) : v; }

u128 Gcd(u128 a, u128 b) {
  if ((a >> 64) == 0 && (b >> 64) == 0) {
    return std::gcd(static_cast<std::uint64_t>(a),
                    static_cast<std::uint64_t>(b));
  }
  if (a == 0) return b;
  if (b == 0) return a;
  auto ctz = [](u128 v) {
    const auto lo = static_cast<std::uint64_t>(v);
    return lo ? __builtin_ctzll(lo)
              : 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
  };
  const int shift = ctz(a | b);
  a >>= ctz(a);
  do {
    b >>= ctz(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

bool Fits(__int128 v) {
  return v > kMin && v <= std::numeric_limits<std::int64_t>::max();
}

mpz_class ToMpz(__int128 v) {
  const bool neg = v < 0;
  const u128 a = Abs(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(a >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(a)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

void Rational::Assign(const mpq_class& q) {
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
      q.get_num() != kMin) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const mpq_class>(q);
  }
}

void Rational::AssignWide(__int128 num, __int128 den) {
  const u128 g = Gcd(Abs(num), static_cast<u128>(den));
  if (g > 1) {
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
  }
  if (Fits(num) && Fits(den)) {
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(ToMpz(num), ToMpz(den));
  num_ = 0;
  den_ = 1;
  big_ = std::make_shared<const mpq_class>(std::move(q));
}

mpq_class Rational::ToMpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)),
                   mpz_class(static_cast<long>(den_)));
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

Rational Rational::floor() const {
  if (big_) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return Rational(mpq_class(f));
  }
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return Rational(q);
}

Rational Rational::fractionality() const {
  const Rational down = *this - floor();
  const Rational up = Rational(1) - down;
  return down < up ? down : up;
}

Rational Rational::operator-() const {
  if (big_) return Rational(mpq_class(-*big_));
  Rational r;
  r.num_ = -num_;  // num_ != INT64_MIN by construction
  r.den_ = den_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    Rational r;
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != kMin) {
        r.num_ = s;
        return r;
      }
    }
    r.AssignWide(static_cast<__int128>(a.num_) * b.den_ +
                     static_cast<__int128>(b.num_) * a.den_,
                 static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  return Rational(mpq_class(a.ToMpq() + b.ToMpq()));
}

Rational operator-(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    Rational r;
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (!__builtin_sub_overflow(a.num_, b.num_, &s) && s != kMin) {
        r.num_ = s;
        return r;
      }
    }
    r.AssignWide(static_cast<__int128>(a.num_) * b.den_ -
                     static_cast<__int128>(b.num_) * a.den_,
                 static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  return Rational(mpq_class(a.ToMpq() - b.ToMpq()));
}

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    Rational r;
    if (a.num_ == 0 || b.num_ == 0) return r;
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t s;
      if (!__builtin_mul_overflow(a.num_, b.num_, &s) && s != kMin) {
        r.num_ = s;
        return r;
      }
    }
    r.AssignWide(static_cast<__int128>(a.num_) * b.num_,
                 static_cast<__int128>(a.den_) * b.den_);
    return r;
  }
  return Rational(mpq_class(a.ToMpq() * b.ToMpq()));
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ArgumentError("Rational: division by zero");
  if (!a.big_ && !b.big_) {
    Rational r;
    if (a.num_ == 0) return r;
    __int128 num = static_cast<__int128>(a.num_) * b.den_;
    __int128 den = static_cast<__int128>(a.den_) * b.num_;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    r.AssignWide(num, den);
    return r;
  }
  return Rational(mpq_class(a.ToMpq() / b.ToMpq()));
}

int Compare(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == b.den_) return (a.num_ > b.num_) - (a.num_ < b.num_);
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return (l > r) - (l < r);
  }
  return cmp(a.ToMpq(), b.ToMpq());
}

}  // namespace mmsfair::internal
