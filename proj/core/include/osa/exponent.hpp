#pragma once
#include <map>
#include <string>

#include "osa/errors.hpp"

namespace osa {

// Integer linear form over named integer parameters: constant + sum(coeff * param).
// Houses symbolic exponents such as m-1, n+l, 2k. Zero coefficients are never stored.
struct ExponentExpr {
  long constant = 0;
  std::map<std::string, long> terms;

  ExponentExpr() = default;
  ExponentExpr(long c) : constant(c) {}  // NOLINT: implicit by design

  static ExponentExpr param(const std::string& name, long coeff = 1) {
    ExponentExpr e;
    if (coeff != 0) e.terms[name] = coeff;
    return e;
  }

  bool isConstant() const { return terms.empty(); }
  bool isZero() const { return constant == 0 && terms.empty(); }

  ExponentExpr& operator+=(const ExponentExpr& o) {
    constant += o.constant;
    for (const auto& [k, v] : o.terms) {
      long nv = (terms.count(k) ? terms[k] : 0) + v;
      if (nv == 0) terms.erase(k); else terms[k] = nv;
    }
    return *this;
  }
  friend ExponentExpr operator+(ExponentExpr a, const ExponentExpr& b) { a += b; return a; }
  friend ExponentExpr operator-(ExponentExpr a, const ExponentExpr& b) { a += b * -1; return a; }
  friend ExponentExpr operator*(const ExponentExpr& a, long s) {
    ExponentExpr e;
    if (s == 0) return e;
    e.constant = a.constant * s;
    for (const auto& [k, v] : a.terms) e.terms[k] = v * s;
    return e;
  }

  friend bool operator==(const ExponentExpr& a, const ExponentExpr& b) {
    return a.constant == b.constant && a.terms == b.terms;
  }
  friend bool operator!=(const ExponentExpr& a, const ExponentExpr& b) { return !(a == b); }
  friend bool operator<(const ExponentExpr& a, const ExponentExpr& b) {
    if (a.constant != b.constant) return a.constant < b.constant;
    return a.terms < b.terms;
  }

  // Component-wise minimum (used for common-monomial extraction).
  static ExponentExpr min(const ExponentExpr& a, const ExponentExpr& b) {
    ExponentExpr e;
    e.constant = a.constant < b.constant ? a.constant : b.constant;
    auto coeff = [](const ExponentExpr& x, const std::string& k) {
      auto it = x.terms.find(k);
      return it == x.terms.end() ? 0L : it->second;
    };
    for (const auto& [k, v] : a.terms) {
      long m = std::min(v, coeff(b, k));
      if (m != 0) e.terms[k] = m;
    }
    for (const auto& [k, v] : b.terms) {
      if (!a.terms.count(k)) {
        long m = std::min(0L, v);
        if (m != 0) e.terms[k] = m;
      }
    }
    return e;
  }

  static ExponentExpr max(const ExponentExpr& a, const ExponentExpr& b) {
    return min(a * -1, b * -1) * -1;
  }

  // Reduce every component mod 2 into {0,1}; used for sign-symbol powers where s^2 = 1.
  ExponentExpr mod2() const {
    ExponentExpr e;
    e.constant = ((constant % 2) + 2) % 2;
    for (const auto& [k, v] : terms) {
      long m = ((v % 2) + 2) % 2;
      if (m != 0) e.terms[k] = m;
    }
    return e;
  }

  // Substitute an integer value for one parameter.
  ExponentExpr substituted(const std::string& name, long value) const {
    ExponentExpr e = *this;
    auto it = e.terms.find(name);
    if (it != e.terms.end()) {
      e.constant += it->second * value;
      e.terms.erase(it);
    }
    return e;
  }

  double evaluate(const std::map<std::string, double>& params) const {
    double v = static_cast<double>(constant);
    for (const auto& [k, c] : terms) {
      auto it = params.find(k);
      if (it == params.end()) throw UnboundSymbol(k);
      v += static_cast<double>(c) * it->second;
    }
    return v;
  }

  // Compact rendering used in exponent positions and constraints: "m-1", "2k", "m+n", "5".
  std::string str() const {
    if (terms.empty()) return std::to_string(constant);
    std::string s;
    bool first = true;
    for (const auto& [k, v] : terms) {
      if (v == 0) continue;
      if (first) {
        if (v == -1) s += "-";
        else if (v != 1) s += std::to_string(v);
      } else {
        s += v < 0 ? "-" : "+";
        if (v != 1 && v != -1) s += std::to_string(v < 0 ? -v : v);
      }
      s += k;
      first = false;
    }
    if (constant != 0) {
      s += constant < 0 ? "-" : "+";
      s += std::to_string(constant < 0 ? -constant : constant);
    }
    return s;
  }

  std::string key() const { return str(); }
};

}  // namespace osa
