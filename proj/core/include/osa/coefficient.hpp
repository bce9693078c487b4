#pragma once
#include <cmath>
#include <complex>
#include <map>
#include <string>

#include "osa/exponent.hpp"
#include "osa/rational.hpp"

namespace osa {

// Product-form scalar: rational * product(param^power) * i^imaginaryPower.
// imaginaryPower is canonical in {0,1}: i^2 = -1 folds into the rational sign.
struct Coefficient {
  Rational rational = Rational(0);
  std::map<std::string, ExponentExpr> params;  // no zero powers stored
  int imaginaryPower = 0;

  Coefficient() = default;
  explicit Coefficient(Rational r) : rational(r) {}

  static Coefficient one() { return Coefficient(Rational(1)); }
  static Coefficient zero() { return Coefficient(Rational(0)); }
  static Coefficient imaginaryUnit() {
    Coefficient c(Rational(1));
    c.imaginaryPower = 1;
    return c;
  }
  static Coefficient param(const std::string& name, ExponentExpr power = ExponentExpr(1)) {
    Coefficient c(Rational(1));
    if (!power.isZero()) c.params[name] = power;
    return c;
  }

  bool isZero() const { return rational.isZero(); }
  bool isPureRational() const { return params.empty() && imaginaryPower == 0; }

  void mulParam(const std::string& name, const ExponentExpr& power) {
    if (power.isZero()) return;
    auto it = params.find(name);
    if (it == params.end()) {
      params[name] = power;
    } else {
      it->second += power;
      if (it->second.isZero()) params.erase(it);
    }
  }

  Coefficient operator*(const Coefficient& o) const {
    Coefficient c;
    c.rational = rational * o.rational;
    if (c.rational.isZero()) return zero();
    c.params = params;
    for (const auto& [k, v] : o.params) c.mulParam(k, v);
    int ip = imaginaryPower + o.imaginaryPower;  // each in {0,1}
    if (ip >= 2) { ip -= 2; c.rational = -c.rational; }
    c.imaginaryPower = ip;
    return c;
  }

  Coefficient operator-() const {
    Coefficient c = *this;
    c.rational = -c.rational;
    return c;
  }

  // Same param/imaginary signature required; adds the rational parts.
  bool sameSignature(const Coefficient& o) const {
    return params == o.params && imaginaryPower == o.imaginaryPower;
  }

  std::complex<double> evaluate(const std::map<std::string, double>& bindings) const {
    double r = rational.value();
    for (const auto& [k, pw] : params) {
      auto it = bindings.find(k);
      if (it == bindings.end()) throw UnboundSymbol(k);
      r *= std::pow(it->second, pw.evaluate(bindings));
    }
    return imaginaryPower == 1 ? std::complex<double>(0.0, r) : std::complex<double>(r, 0.0);
  }

  // Substitute an integer value for a named parameter wherever it occurs
  // (as a base and inside exponent forms). The power must become constant.
  Coefficient substituted(const std::string& name, long value) const {
    Coefficient c;
    c.rational = rational;
    c.imaginaryPower = imaginaryPower;
    for (const auto& [k, pw] : params) {
      ExponentExpr p = pw.substituted(name, value);
      if (k == name) {
        if (!p.isConstant()) throw UnsupportedRHS("parameter " + name + " with symbolic self-power");
        c.rational = c.rational * Rational(value).pow(p.constant);
      } else {
        if (!p.isZero()) c.mulParam(k, p);
      }
    }
    return c;
  }

  std::string key() const {
    std::string s = rational.str() + "|i" + std::to_string(imaginaryPower);
    for (const auto& [k, v] : params) s += "|" + k + "^" + v.key();
    return s;
  }

  // Signature key excluding the rational part (merge key for like terms).
  std::string signatureKey() const {
    std::string s = "i" + std::to_string(imaginaryPower);
    for (const auto& [k, v] : params) s += "|" + k + "^" + v.key();
    return s;
  }
};

}  // namespace osa
