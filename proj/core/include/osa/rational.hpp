#pragma once
#include <cstdint>
#include <numeric>
#include <string>

#include "osa/errors.hpp"

namespace osa {

// Exact rational arithmetic on int64 with overflow detection via __int128.
// Canonical form: gcd(num, den) == 1, den > 0, zero is 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool isZero() const { return num_ == 0; }
  bool isOne() const { return num_ == 1 && den_ == 1; }
  bool isInteger() const { return den_ == 1; }
  bool negative() const { return num_ < 0; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(checked(-static_cast<__int128>(num_)), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
    __int128 d = static_cast<__int128>(a.den_) * b.den_;
    return fromWide(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return fromWide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw OverflowError("rational division by zero");
    return fromWide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

  Rational pow(long e) const {
    Rational r(1);
    Rational base = *this;
    long k = e;
    if (k < 0) {
      base = Rational(1) / base;
      k = -k;
    }
    for (long i = 0; i < k; ++i) r = r * base;
    return r;
  }

  // "p" or "p/q"
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("rational arithmetic overflow");
    return static_cast<std::int64_t>(v);
  }

  static Rational fromWide(__int128 n, __int128 d) {
    if (d == 0) throw OverflowError("rational division by zero");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcdWide(a, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    r.num_ = checked(n);
    r.den_ = checked(d);
    return r;
  }

  static __int128 gcdWide(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  void reduce() {
    Rational r = fromWide(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }
};

}  // namespace osa
