#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "osa/errors.hpp"
#include "osa/expr.hpp"

using namespace osa;

namespace {

const double PI = std::acos(-1.0);

const std::map<std::string, double> kParams = {
    {"a", 1.3}, {"b", 0.7}, {"m", 3.0}, {"n", 2.0}, {"c", 1.9}};

// Trajectory u(x) = sin(x) + 2 (positive, smooth); phi = exp for f, g, h so
// every derivative order of every symbol has a consistent value.
Bindings bindingsAt(double x) {
  Bindings b;
  b.params = kParams;
  b.fieldDerivs.resize(8);
  b.fieldDerivs[0] = std::sin(x) + 2.0;
  for (int k = 1; k < 8; ++k) b.fieldDerivs[k] = std::sin(x + k * PI / 2.0);
  double u = std::sin(x) + 2.0;
  for (char fn : {'f', 'g', 'h'})
    for (int r = 0; r < 8; ++r) b.funcEvals[{fn, r}] = std::exp(u);
  return b;
}

std::mt19937 rng(20260816);

long pick(long lo, long hi) {  // inclusive
  return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

Monomial randomMonomial() {
  Monomial m;
  long num = pick(-3, 3);
  if (num == 0) num = 1;
  m.coeff.rational = Rational(num, pick(1, 4));
  if (pick(0, 3) == 0) m.coeff.mulParam("a", ExponentExpr(1));
  if (pick(0, 4) == 0) m.coeff.mulParam("b", ExponentExpr(pick(1, 2)));
  if (pick(0, 4) == 0) m.coeff.imaginaryPower = 1;
  long nf = pick(1, 3);
  for (long i = 0; i < nf; ++i) {
    switch (pick(0, 4)) {
      case 0:
        m.factors.push_back(Factor::fieldDeriv(static_cast<int>(pick(0, 3)),
                                               ExponentExpr(pick(1, 3))));
        break;
      case 1: {  // symbolic power of the bare field, e.g. u^(m-1)
        ExponentExpr p = ExponentExpr::param(pick(0, 1) ? "m" : "n");
        p += ExponentExpr(pick(-1, 1));
        m.factors.push_back(Factor::fieldDeriv(0, p));
        break;
      }
      case 2:
        m.factors.push_back(Factor::funcSym(static_cast<char>('f' + pick(0, 2)),
                                            static_cast<int>(pick(0, 2)), pick(1, 2)));
        break;
      case 3:
        m.factors.push_back(Factor::elementary(pick(0, 1) == 1, pick(1, 2)));
        break;
      case 4:
        m.factors.push_back(Factor::fieldDeriv(static_cast<int>(pick(1, 2)),
                                               ExponentExpr(pick(1, 2))));
        break;
    }
  }
  m.canonicalizeFactors();
  return m;
}

Expr randomExpr() {
  Expr e;
  long nm = pick(1, 3);
  for (long i = 0; i < nm; ++i) e.monomials.push_back(randomMonomial());
  return canonicalize(e);
}

Expr uPow(long p, Coefficient c = Coefficient::one()) {
  Expr e;
  Monomial m(std::move(c));
  m.factors.push_back(Factor::fieldDeriv(0, ExponentExpr(p)));
  m.canonicalizeFactors();
  e.monomials.push_back(std::move(m));
  return canonicalize(e);
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK((-Rational(5, 7)).str() == "-5/7");
  CHECK(Rational(2, 1).str() == "2");
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational(2).pow(10) == Rational(1024));
  CHECK_THROWS_AS(Rational(1, 0), OverflowError);
}

TEST_CASE("exponent linear forms") {
  ExponentExpr m = ExponentExpr::param("m");
  ExponentExpr e = m;
  e += ExponentExpr(-1);
  CHECK(e.str() == "m-1");
  CHECK(ExponentExpr::param("k", 2).str() == "2k");
  ExponentExpr mn = ExponentExpr::param("m");
  mn += ExponentExpr::param("n");
  CHECK(mn.str() == "m+n");
  CHECK(ExponentExpr(5).str() == "5");
  CHECK(ExponentExpr::param("k", -2).str() == "-2k");
  CHECK(e.substituted("m", 1).isZero());
  CHECK(e.substituted("m", 4) == ExponentExpr(3));
  CHECK(ExponentExpr::min(ExponentExpr(2), ExponentExpr::param("m")) == ExponentExpr(0));
  CHECK(ExponentExpr::min(ExponentExpr(1), ExponentExpr(3)) == ExponentExpr(1));
  ExponentExpr mm1 = ExponentExpr::param("m");
  mm1 += ExponentExpr(1);
  CHECK(ExponentExpr::min(mm1, ExponentExpr::param("m")) == ExponentExpr::param("m"));
  CHECK(ExponentExpr::param("l", 3).mod2() == ExponentExpr::param("l"));
  CHECK(ExponentExpr::param("l", 2).mod2().isZero());
  CHECK(ExponentExpr(7).mod2() == ExponentExpr(1));
  double v = mn.evaluate({{"m", 3.0}, {"n", 2.0}});
  CHECK(v == doctest::Approx(5.0));
  CHECK_THROWS_AS(mn.evaluate({{"m", 3.0}}), UnboundSymbol);
}

TEST_CASE("coefficient algebra") {
  Coefficient i = Coefficient::imaginaryUnit();
  Coefficient i2 = i * i;
  CHECK(i2.imaginaryPower == 0);
  CHECK(i2.rational == Rational(-1));
  Coefficient c = Coefficient::param("c", 2);
  Coefficient folded = c.substituted("c", 3);
  CHECK(folded.isPureRational());
  CHECK(folded.rational == Rational(9));
  auto z = (Coefficient::param("a") * Coefficient::imaginaryUnit())
               .evaluate({{"a", 2.0}});
  CHECK(z.real() == doctest::Approx(0.0));
  CHECK(z.imag() == doctest::Approx(2.0));
}

TEST_CASE("canonicalize merges and cancels") {
  // u * u -> u^2, evaluated at u=2 gives 4
  Expr e;
  Monomial m;
  m.factors.push_back(Factor::fieldDeriv(0));
  m.factors.push_back(Factor::fieldDeriv(0));
  m.canonicalizeFactors();
  CHECK(m.factors.size() == 1);
  CHECK(m.factors[0].power == ExponentExpr(2));

  // 1/2 u + 1/3 u -> 5/6 u
  Expr s = add(uPow(1, Coefficient(Rational(1, 2))), uPow(1, Coefficient(Rational(1, 3))));
  REQUIRE(s.monomials.size() == 1);
  CHECK(s.monomials[0].coeff.rational == Rational(5, 6));

  // u - u -> empty
  Expr z = add(uPow(1), negate(uPow(1)));
  CHECK(z.empty());

  // a*u and b*u do not merge
  Expr t = add(uPow(1, Coefficient::param("a")), uPow(1, Coefficient::param("b")));
  CHECK(t.monomials.size() == 2);
}

TEST_CASE("canonicalize is idempotent on random expressions") {
  for (int i = 0; i < 100; ++i) {
    Expr e = randomExpr();
    Expr once = canonicalize(e);
    Expr twice = canonicalize(once);
    CHECK(structurallyEqual(once, twice));
  }
}

TEST_CASE("symbolic power of merged factors evaluates") {
  // u^m * u^2 with m=3 at u=2 -> 2^5 = 32
  Monomial m;
  m.factors.push_back(Factor::fieldDeriv(0, ExponentExpr::param("m")));
  m.factors.push_back(Factor::fieldDeriv(0, ExponentExpr(2)));
  m.canonicalizeFactors();
  REQUIRE(m.factors.size() == 1);
  Expr e;
  e.monomials.push_back(m);
  Bindings b;
  b.params = {{"m", 3.0}};
  b.fieldDerivs = {2.0};
  CHECK(evaluate(e, b).real() == doctest::Approx(32.0));
}

TEST_CASE("third derivative of u^2 expands by Leibniz") {
  Expr u2 = uPow(2);
  Expr d3 = differentiate_x(differentiate_x(differentiate_x(u2)));
  // d^3/dx^3 u^2 = 2 u u_xxx + 6 u_x u_xx
  Expr expect;
  {
    Monomial m1(Coefficient(Rational(2)));
    m1.factors.push_back(Factor::fieldDeriv(0));
    m1.factors.push_back(Factor::fieldDeriv(3));
    m1.canonicalizeFactors();
    Monomial m2(Coefficient(Rational(6)));
    m2.factors.push_back(Factor::fieldDeriv(1));
    m2.factors.push_back(Factor::fieldDeriv(2));
    m2.canonicalizeFactors();
    expect.monomials = {m1, m2};
  }
  CHECK(structurallyEqual(d3, expect));
}

TEST_CASE("derivative of symbolic power uses the chain rule") {
  Expr un = uPow(1);
  un.monomials[0].factors[0].power = ExponentExpr::param("n");
  Expr d = differentiate_x(un);
  // n * u^(n-1) * u_x
  REQUIRE(d.monomials.size() == 1);
  const Monomial& m = d.monomials[0];
  CHECK(m.coeff.rational == Rational(1));
  REQUIRE(m.coeff.params.count("n") == 1);
  CHECK(m.coeff.params.at("n") == ExponentExpr(1));
  REQUIRE(m.factors.size() == 2);
}

TEST_CASE("x-derivative matches finite differences on random expressions") {
  const double h = 1e-5;
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Expr e = randomExpr();
    Expr de = differentiate_x(e);
    for (double x : {0.3, 1.1, 2.7}) {
      std::complex<double> plus = evaluate(e, bindingsAt(x + h));
      std::complex<double> minus = evaluate(e, bindingsAt(x - h));
      std::complex<double> fd = (plus - minus) / (2.0 * h);
      std::complex<double> sym = evaluate(de, bindingsAt(x));
      double scale = std::max(1.0, std::abs(fd));
      CHECK(std::abs(fd - sym) <= 1e-6 * scale);
      ++checked;
    }
  }
  CHECK(checked == 600);
}

TEST_CASE("x-derivative is linear") {
  for (int i = 0; i < 50; ++i) {
    Expr a = randomExpr();
    Expr b = randomExpr();
    Expr lhs = differentiate_x(add(a, b));
    Expr rhs = add(differentiate_x(a), differentiate_x(b));
    CHECK(structurallyEqual(lhs, rhs));
  }
}

TEST_CASE("modulus factors cannot be differentiated") {
  Expr e;
  Monomial m;
  m.factors.push_back(Factor::modulus(ExponentExpr(2)));
  m.factors.push_back(Factor::fieldDeriv(0));
  m.canonicalizeFactors();
  e.monomials.push_back(m);
  CHECK_THROWS_AS(differentiate_x(e), ModulusNotDifferentiable);
}

TEST_CASE("modulus factors evaluate with real magnitude") {
  Expr e;
  Monomial m;
  m.factors.push_back(Factor::modulus(ExponentExpr(2)));
  e.monomials.push_back(m);
  Bindings b;
  b.fieldDerivs = {std::complex<double>(3.0, 4.0)};
  CHECK(evaluate(e, b).real() == doctest::Approx(25.0));
  CHECK(evaluate(e, b).imag() == doctest::Approx(0.0));
}

TEST_CASE("integer powers of negative bases stay real") {
  Expr e = uPow(3);
  Bindings b;
  b.fieldDerivs = {-2.0};
  auto v = evaluate(e, b);
  CHECK(v.real() == doctest::Approx(-8.0));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("evaluate reports unbound symbols") {
  Expr e = uPow(2, Coefficient::param("q"));
  Bindings b;
  b.fieldDerivs = {1.5};
  CHECK_THROWS_AS(evaluate(e, b), UnboundSymbol);

  Expr f;
  Monomial m;
  m.factors.push_back(Factor::funcSym('f', 1));
  f.monomials.push_back(m);
  Bindings b2;
  b2.fieldDerivs = {1.0};
  CHECK_THROWS_AS(evaluate(f, b2), UnboundSymbol);
}

TEST_CASE("substitute_param folds exponents and coefficient bases") {
  // u^(m-1) with m=1 becomes the constant 1 (factor drops)
  Expr e = uPow(1);
  ExponentExpr p = ExponentExpr::param("m");
  p += ExponentExpr(-1);
  e.monomials[0].factors[0].power = p;
  Expr s = substitute_param(e, "m", 1);
  REQUIRE(s.monomials.size() == 1);
  CHECK(s.monomials[0].factors.empty());
  CHECK(s.monomials[0].coeff.rational == Rational(1));

  Expr c = uPow(1, Coefficient::param("c", 2));
  Expr sc = substitute_param(c, "c", 3);
  REQUIRE(sc.monomials.size() == 1);
  CHECK(sc.monomials[0].coeff.isPureRational());
  CHECK(sc.monomials[0].coeff.rational == Rational(9));
}

TEST_CASE("field derivative for quadrature") {
  // d/du (c u^3) = 3 c u^2
  Expr e = uPow(3, Coefficient::param("c"));
  Expr d = differentiate_u(e);
  REQUIRE(d.monomials.size() == 1);
  CHECK(d.monomials[0].coeff.rational == Rational(3));
  REQUIRE(d.monomials[0].factors.size() == 1);
  CHECK(d.monomials[0].factors[0].power == ExponentExpr(2));

  // constants differentiate away
  Expr k;
  k.monomials.push_back(Monomial(Coefficient(Rational(5))));
  CHECK(differentiate_u(k).empty());

  // derivative factors are rejected
  Expr bad;
  Monomial m;
  m.factors.push_back(Factor::fieldDeriv(1));
  bad.monomials.push_back(m);
  CHECK_THROWS_AS(differentiate_u(bad), UnsupportedRHS);
}

TEST_CASE("time-derivative terms evaluate through their own bindings") {
  // i * psi_t  (plus psi_xx as an ordinary monomial)
  Expr e;
  e.field = "psi";
  TimeDeriv td;
  td.differentiand = Monomial(Coefficient::imaginaryUnit());
  td.differentiand.factors.push_back(Factor::fieldDeriv(0));
  td.tOrder = 1;
  e.timeDerivs.push_back(td);
  Monomial pxx;
  pxx.factors.push_back(Factor::fieldDeriv(2));
  e.monomials.push_back(pxx);

  Bindings b;
  b.fieldDerivs = {std::complex<double>(1.0, 0.0), 0.0, std::complex<double>(0.5, -0.25)};
  b.timeFieldDerivs[{1, 0}] = std::complex<double>(2.0, 3.0);
  auto v = evaluate(e, b);
  // i*(2+3i) + (0.5-0.25i) = (-3+2i) + (0.5-0.25i)
  CHECK(v.real() == doctest::Approx(-2.5));
  CHECK(v.imag() == doctest::Approx(1.75));

  Bindings missing;
  missing.fieldDerivs = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(evaluate(e, missing), UnboundSymbol);
}

TEST_CASE("multiplying time derivatives by field factors is rejected") {
  Expr ut;
  TimeDeriv td;
  td.differentiand.factors.push_back(Factor::fieldDeriv(0));
  ut.timeDerivs.push_back(td);

  Expr u = uPow(1);
  CHECK_THROWS_AS(multiply(u, ut), UnsupportedRHS);

  // but scaling by a bare coefficient is fine
  Expr c;
  c.monomials.push_back(Monomial(Coefficient(Rational(3))));
  Expr scaled = multiply(c, ut);
  REQUIRE(scaled.timeDerivs.size() == 1);
  CHECK(scaled.timeDerivs[0].differentiand.coeff.rational == Rational(3));
}

TEST_CASE("x-derivative of time derivatives is rejected") {
  Expr ut;
  TimeDeriv td;
  td.differentiand.factors.push_back(Factor::fieldDeriv(0));
  ut.timeDerivs.push_back(td);
  CHECK_THROWS_AS(differentiate_x(ut), UnsupportedRHS);
}
