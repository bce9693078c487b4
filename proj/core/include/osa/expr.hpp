#pragma once
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "osa/coefficient.hpp"

namespace osa {

// One multiplicative factor of a monomial.
//  - FieldDeriv(order k, power p): (d^k/dx^k u)^p, k=0 meaning u^p
//  - FuncSym(func in {f,g,h}, order r, power p): (func^(r)(u))^p
//  - Elementary(sin/cos of the field, power p)
//  - Modulus(power p): |u|^p
struct Factor {
  enum class Kind { FieldDeriv = 0, FuncSym = 1, Elementary = 2, Modulus = 3 };

  Kind kind = Kind::FieldDeriv;
  int order = 0;      // FieldDeriv: derivative order; FuncSym: derivative order
  char func = 0;      // FuncSym: 'f' | 'g' | 'h'
  bool isCos = false; // Elementary: false=sin, true=cos
  ExponentExpr power = ExponentExpr(1);

  static Factor fieldDeriv(int order, ExponentExpr power = ExponentExpr(1)) {
    Factor f; f.kind = Kind::FieldDeriv; f.order = order; f.power = std::move(power); return f;
  }
  static Factor funcSym(char name, int order, long power = 1) {
    Factor f; f.kind = Kind::FuncSym; f.func = name; f.order = order; f.power = ExponentExpr(power); return f;
  }
  static Factor elementary(bool cosine, long power = 1) {
    Factor f; f.kind = Kind::Elementary; f.isCos = cosine; f.power = ExponentExpr(power); return f;
  }
  static Factor modulus(ExponentExpr power) {
    Factor f; f.kind = Kind::Modulus; f.power = std::move(power); return f;
  }

  // Identity of the factor ignoring its power; ties are impossible after merge.
  std::string slotKey() const;
  std::string key() const { return slotKey() + "^" + power.key(); }
  friend bool operator==(const Factor& a, const Factor& b) {
    return a.kind == b.kind && a.order == b.order && a.func == b.func && a.isCos == b.isCos &&
           a.power == b.power;
  }
};

struct Monomial {
  Coefficient coeff = Coefficient::one();
  std::vector<Factor> factors;  // canonical: sorted by slotKey, merged, no zero powers

  Monomial() = default;
  explicit Monomial(Coefficient c) : coeff(std::move(c)) {}
  Monomial(Coefficient c, std::vector<Factor> fs) : coeff(std::move(c)), factors(std::move(fs)) {
    canonicalizeFactors();
  }

  void canonicalizeFactors();
  Monomial times(const Monomial& o) const;
  // Monomial merge identity: factor list plus coefficient signature (params, i-power).
  std::string mergeKey() const;
  std::string key() const;
};

// A time/mixed derivative of a single field occurrence: coeff * d^t/dt^t d^x/dx^x (u).
// The differentiand is kept as a Monomial (coefficient times u^1).
struct TimeDeriv {
  Monomial differentiand;
  int tOrder = 1;
  int xOrder = 0;
  std::string mergeKey() const;
};

struct Expr {
  std::vector<Monomial> monomials;
  std::vector<TimeDeriv> timeDerivs;
  std::string field = "u";  // which field name the source used ("u" or "psi")

  bool empty() const { return monomials.empty() && timeDerivs.empty(); }
};

// Numeric bindings for evaluate().
struct Bindings {
  std::vector<std::complex<double>> fieldDerivs;          // index k: d^k/dx^k u
  std::map<std::pair<char, int>, std::complex<double>> funcEvals;  // (func, order) -> value
  std::map<std::pair<int, int>, std::complex<double>> timeFieldDerivs;  // (tOrder, xOrder) -> value
  std::map<std::string, double> params;
};

Expr canonicalize(const Expr& e);
Expr add(const Expr& a, const Expr& b);
Expr negate(const Expr& e);
Expr multiply(const Expr& a, const Expr& b);  // requires at most one side with time derivatives
Expr differentiate_x(const Expr& e);          // rejects time derivatives and modulus factors
std::complex<double> evaluate(const Expr& e, const Bindings& b);

// Substitute an integer value for a named parameter (exponents and coefficient bases).
Expr substitute_param(const Expr& e, const std::string& name, long value);

// Structural equality of canonical forms.
bool structurallyEqual(const Expr& a, const Expr& b);

// Derivative with respect to the field itself, defined for monomials in powers of u
// (no derivative/elementary/modulus factors); used by the diffusion quadrature.
Expr differentiate_u(const Expr& e);

namespace detail {
// Multiply a monomial by a symbolic integer linear form, distributing into
// one monomial per component (constant piece plus one per parameter).
std::vector<Monomial> scaleByExponent(const Monomial& m, const ExponentExpr& e);
std::complex<double> evaluateMonomial(const Monomial& m, const Bindings& b);
}  // namespace detail

}  // namespace osa
