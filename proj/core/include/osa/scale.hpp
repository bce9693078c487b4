#pragma once
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "osa/expr.hpp"

namespace osa {

// phi^(order)(A) raised to an integer power, phi in {f,g,h}.
struct FuncEval {
  char func = 'f';
  int order = 0;
  int power = 1;
  friend bool operator<(const FuncEval& a, const FuncEval& b) {
    if (a.func != b.func) return a.func < b.func;
    if (a.order != b.order) return a.order < b.order;
    return a.power < b.power;
  }
  friend bool operator==(const FuncEval& a, const FuncEval& b) {
    return a.func == b.func && a.order == b.order && a.power == b.power;
  }
};

// sin(A) or cos(A) raised to an integer power.
struct ElemEval {
  bool isCos = false;
  int power = 1;
  friend bool operator<(const ElemEval& a, const ElemEval& b) {
    if (a.isCos != b.isCos) return a.isCos < b.isCos;
    return a.power < b.power;
  }
  friend bool operator==(const ElemEval& a, const ElemEval& b) {
    return a.isCos == b.isCos && a.power == b.power;
  }
};

// One term of the algebraic image of an equation: coeff * sigma^s * V^v * A^a * L^l
// * products of function/elementary values at A.
struct ScaleTerm {
  Coefficient coeff;
  ExponentExpr aPower;      // power of the amplitude A
  ExponentExpr lPower;      // power of the width L (usually <= 0)
  ExponentExpr sigmaPower;  // power of the sign symbol, reduced mod 2
  int vPower = 0;           // power of the velocity V
  std::vector<FuncEval> funcEvals;
  std::vector<ElemEval> elemEvals;

  std::string signatureKey() const;  // everything except the rational (merge identity)
  std::string fullKey() const;
};

struct ScaleRelation {
  enum class Mode { Real, Envelope };
  std::vector<ScaleTerm> terms;
  Mode mode = Mode::Real;
  // Envelope relations split into real/imaginary parts; this tags which part
  // a relation is (the imaginary part has had the common factor i divided out).
  bool imaginaryPart = false;

  bool empty() const { return terms.empty(); }
};

// Numeric evaluation point for relations and branches.
struct RelationBindings {
  double A = 1.0;
  double L = 1.0;
  double V = 1.0;
  int sigma = 1;
  std::map<std::string, double> params;
  std::map<std::pair<char, int>, double> funcEvals;
};

// Replace every time derivative (tOrder j, xOrder r) with (-V)^j times the
// (j+r)-th x-derivative of its differentiand; V enters as a reserved parameter.
Expr traveling_reduce(const Expr& e);

// The one-scale substitution. Real mode returns one relation; envelope mode
// splits into real and imaginary parts and returns the nontrivial part(s).
std::vector<ScaleRelation> scale_substitute(const Expr& e, ScaleRelation::Mode mode);

// Divide out the greatest common (A-power, L-power, sigma-power) monomial.
ScaleRelation normalize(const ScaleRelation& r);

// Canonical merge + deterministic ordering of terms.
ScaleRelation canonicalizeRelation(const ScaleRelation& r);

// Fold sigma = +-1 and the velocity sign tau into the coefficients; the
// result has no sign-symbol powers and tau-flipped velocity terms.
ScaleRelation specialize_signs(const ScaleRelation& r, int sigma, int tau);

std::complex<double> evaluateTerm(const ScaleTerm& t, const RelationBindings& b);
std::complex<double> evaluateRelation(const ScaleRelation& r, const RelationBindings& b);

// Render one term without its sign (magnitude text) and the full relation "... = 0".
std::string renderTermBody(const ScaleTerm& t);
std::string renderTermList(const std::vector<ScaleTerm>& terms);  // signed, "+"-joined
std::string renderRelation(const ScaleRelation& r);

// Velocity ansatz: V = coeff * A^exponent (PowerLaw) or V = V0 * f'(A) (FPrime).
struct Ansatz {
  enum class Kind { PowerLaw, FPrime };
  Kind kind = Kind::PowerLaw;
  Coefficient coeff = Coefficient::one();  // e.g. alpha, or m*V0
  ExponentExpr exponent = ExponentExpr(0);
  std::string text;  // display form, e.g. "V = alpha*A^(n-1)"
};

ScaleRelation apply_ansatz(const ScaleRelation& r, const Ansatz& a);

// Parse an ansatz of the form "V = COEFF*A^(EXPR)" (power law) or
// "V = COEFF*f'(A)" (first-derivative law, f in {f,g,h}). COEFF is a product
// of integer rationals and parameter names; EXPR is an integer-linear form in
// exponent parameters ("m-1", "2k", "5"). Throws ParseError with position.
Ansatz parse_ansatz(const std::string& src);

}  // namespace osa
