#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "osa/errors.hpp"
#include "osa/expr.hpp"
#include "osa/parse.hpp"

using namespace osa;

namespace {

struct Eq {
  std::string src;
  std::vector<std::string> params;
};

// Every equation the registry stores in DSL form.
const std::vector<Eq> kEquations = {
    {"u_t + 6*u*u_x + u_xxx = 0", {}},
    {"u_t + u^2*u_x + u_xxx = 0", {}},
    {"u_t + (u^2)_x + (u^2)_xxx = 0", {}},
    {"u_t + (u^n)_x + (u^n)_xxx = 0", {"n"}},
    {"u_t + (u^n)_x + (u^m)_xxx = 0", {"n", "m"}},
    {"u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0", {"eps"}},
    {"u_t + u*u_x - u_xx = 0", {}},
    {"u_t + a*(u^m)_x - mu*(u^k)_xx + c*u^gamma = 0", {"a", "mu", "c", "m", "k", "gamma"}},
    {"u_t + a*(u^m)_x - mu*(u^k)_xx = 0", {"a", "mu", "m", "k"}},
    {"u_xt - sin(u) = 0", {}},
    {"i*psi_t + psi_xx + 2*|psi|^2*psi = 0", {}},
    {"i*psi_t + psi_xx + |psi|^(n-1)*psi = 0", {"n"}},
    {"i*psi_t + 1/2*psi_xx - a*|psi|^2*psi - v0*psi + psi = 0", {"a", "v0"}},
    {"u_xx - 1/c^2*u_tt = 0", {"c"}},
    {"u_t + a*(u^m)_x + mu*(u^k)_xx + (u^n)_xxx = 0", {"a", "mu", "m", "k", "n"}},
    {"u_t + f(u)_x + g(u)_xx + h(u)_xxx = 0", {}},
    {"u_t + u_x + u_xxx + eps*(u_xx^2)_x = 0", {"eps"}},
    {"u_t + u*u_x + u_xxx + eps*(u_xx^2)_x = 0", {"eps"}},
    {"-1/2*hbar^2/mass*psi_xx + En*psi - Vp*psi + a*psi^3 = 0",
     {"hbar", "mass", "En", "Vp", "a"}},
};

Expr fieldPow(long p, Coefficient c = Coefficient::one()) {
  Expr e;
  Monomial m(std::move(c));
  m.factors.push_back(Factor::fieldDeriv(0, ExponentExpr(p)));
  m.canonicalizeFactors();
  e.monomials.push_back(std::move(m));
  return canonicalize(e);
}

}  // namespace

TEST_CASE("all registry equations round-trip") {
  for (const auto& eq : kEquations) {
    CAPTURE(eq.src);
    Expr first = parse_equation(eq.src, eq.params);
    std::string text = render(first);
    CAPTURE(text);
    Expr second = parse_equation(text, eq.params);
    CHECK(structurallyEqual(first, second));
    // a second round trip is a fixed point
    CHECK(render(second) == text);
  }
}

TEST_CASE("kdv parses to one time derivative and two monomials") {
  Expr e = parse_equation("u_t + 6*u*u_x + u_xxx = 0");
  REQUIRE(e.timeDerivs.size() == 1);
  CHECK(e.timeDerivs[0].tOrder == 1);
  CHECK(e.timeDerivs[0].xOrder == 0);
  CHECK(e.timeDerivs[0].differentiand.coeff.rational == Rational(1));
  REQUIRE(e.monomials.size() == 2);
  CHECK(e.field == "u");
  CHECK(render(e) == "u_t + 6*u*u_x + u_xxx = 0");
}

TEST_CASE("grouped powers expand at parse time") {
  Expr e = parse_equation("u_t + (u^2)_x + (u^2)_xxx = 0");
  // (u^2)_x = 2 u u_x ; (u^2)_xxx = 2 u u_xxx + 6 u_x u_xx
  Expr manual;
  {
    Monomial a(Coefficient(Rational(2)));
    a.factors.push_back(Factor::fieldDeriv(0));
    a.factors.push_back(Factor::fieldDeriv(1));
    a.canonicalizeFactors();
    Monomial b(Coefficient(Rational(2)));
    b.factors.push_back(Factor::fieldDeriv(0));
    b.factors.push_back(Factor::fieldDeriv(3));
    b.canonicalizeFactors();
    Monomial c(Coefficient(Rational(6)));
    c.factors.push_back(Factor::fieldDeriv(1));
    c.factors.push_back(Factor::fieldDeriv(2));
    c.canonicalizeFactors();
    manual.monomials = {a, b, c};
  }
  Expr monos;
  monos.monomials = e.monomials;
  CHECK(structurallyEqual(monos, canonicalize(manual)));
}

TEST_CASE("complex field equation keeps i and modulus factors") {
  Expr e = parse_equation("i*psi_t + psi_xx + 2*|psi|^2*psi = 0");
  CHECK(e.field == "psi");
  REQUIRE(e.timeDerivs.size() == 1);
  CHECK(e.timeDerivs[0].differentiand.coeff.imaginaryPower == 1);
  bool sawModulus = false;
  for (const auto& m : e.monomials)
    for (const auto& f : m.factors)
      if (f.kind == Factor::Kind::Modulus) {
        sawModulus = true;
        CHECK(f.power == ExponentExpr(2));
      }
  CHECK(sawModulus);
}

TEST_CASE("symbolic exponents parse into factor powers") {
  Expr e = parse_equation("u_t + a*(u^m)_x - mu*(u^k)_xx + c*u^gamma = 0",
                          {"a", "mu", "c", "m", "k", "gamma"});
  bool sawGamma = false;
  for (const auto& m : e.monomials)
    for (const auto& f : m.factors)
      if (f.power == ExponentExpr::param("gamma")) sawGamma = true;
  CHECK(sawGamma);
  // (u^m)_x expands to m*u^(m-1)*u_x
  std::string text = render(e);
  CHECK(text.find("u^(m-1)") != std::string::npos);
  CHECK(text.find("u^gamma") != std::string::npos);
}

TEST_CASE("function factors expand derivatives eagerly") {
  Expr e = parse_equation("u_t + f(u)_x + g(u)_xx + h(u)_xxx = 0");
  CHECK(e.timeDerivs.size() == 1);
  // f'(u)u_x ; g''u_x^2 + g'u_xx ; h'''u_x^3 + 3h''u_x u_xx + h'u_xxx
  CHECK(e.monomials.size() == 6);
  std::string text = render(e);
  CHECK(text.find("f'(u)") != std::string::npos);
  CHECK(text.find("h'''(u)") != std::string::npos);
  Expr again = parse_equation(text);
  CHECK(structurallyEqual(e, again));
}

TEST_CASE("sine-Gordon mixed subscript") {
  Expr e = parse_equation("u_xt - sin(u) = 0");
  REQUIRE(e.timeDerivs.size() == 1);
  CHECK(e.timeDerivs[0].tOrder == 1);
  CHECK(e.timeDerivs[0].xOrder == 1);
  REQUIRE(e.monomials.size() == 1);
  CHECK(e.monomials[0].factors[0].kind == Factor::Kind::Elementary);
  CHECK(e.monomials[0].coeff.rational == Rational(-1));
  CHECK(render(e) == "u_xt - sin(u) = 0");
}

TEST_CASE("rational and parameter division") {
  Expr e = parse_equation("u_xx - 1/c^2*u_tt = 0", {"c"});
  REQUIRE(e.timeDerivs.size() == 1);
  const Coefficient& c = e.timeDerivs[0].differentiand.coeff;
  CHECK(c.rational == Rational(-1));
  REQUIRE(c.params.count("c") == 1);
  CHECK(c.params.at("c") == ExponentExpr(-2));
  CHECK(render(e).find("1/c^2") != std::string::npos);

  Expr s = parse_equation("-1/2*hbar^2/mass*psi_xx + En*psi - Vp*psi + a*psi^3 = 0",
                          {"hbar", "mass", "En", "Vp", "a"});
  bool found = false;
  for (const auto& m : s.monomials) {
    if (m.coeff.params.count("hbar")) {
      found = true;
      CHECK(m.coeff.rational == Rational(-1, 2));
      CHECK(m.coeff.params.at("mass") == ExponentExpr(-1));
    }
  }
  CHECK(found);

  // trailing division binds to the coefficient
  Expr t = parse_equation("u/2 = 0");
  REQUIRE(t.monomials.size() == 1);
  CHECK(t.monomials[0].coeff.rational == Rational(1, 2));
}

TEST_CASE("velocity symbol is available without declaration") {
  Expr e = parse_equation("V*u - a*u^2 = 0", {"a"});
  REQUIRE(e.monomials.size() == 2);
  bool sawV = false;
  for (const auto& m : e.monomials)
    if (m.coeff.params.count("V")) sawV = true;
  CHECK(sawV);
  Expr again = parse_equation(render(e), {"a"});
  CHECK(structurallyEqual(e, again));
}

TEST_CASE("cancellation renders as the zero equation") {
  CHECK(render(parse_equation("u - u = 0")) == "0 = 0");
}

TEST_CASE("whitespace is insignificant") {
  Expr a = parse_equation("u_t+6*u*u_x+u_xxx=0");
  Expr b = parse_equation("  u_t  +  6 * u * u_x + u_xxx   =  0 ");
  CHECK(structurallyEqual(a, b));
}

TEST_CASE("leading minus negates the first term") {
  Expr e = parse_equation("-u_t + u = 0");
  REQUIRE(e.timeDerivs.size() == 1);
  CHECK(e.timeDerivs[0].differentiand.coeff.rational == Rational(-1));
}

TEST_CASE("grammar violations raise ParseError") {
  auto bad = [](const std::string& src, const std::vector<std::string>& params = {}) {
    CAPTURE(src);
    CHECK_THROWS_AS(parse_equation(src, params), ParseError);
  };
  bad("u_t + (u^2_x + u_xxx = 0");          // dropped closing paren
  bad("u_t + u^2)_x = 0");                  // dropped opening paren
  bad("u_t + 6*w*u_x = 0");                 // unknown identifier
  bad("u_t + a*u_x = 0");                   // undeclared parameter
  bad("u_y = 0");                           // bad subscript letter
  bad("u^1.5 = 0");                         // non-integer exponent
  bad("u^(3/2) = 0");                       // rational exponent
  bad("u_t + 6**u = 0");                    // doubled operator
  bad("|psi*psi = 0");                      // unbalanced modulus
  bad("u_t + u");                           // missing = 0
  bad("u + 1 = 1");                         // nonzero right-hand side
  bad("u = 0 + u");                         // trailing garbage
  bad("u*u_t = 0");                         // field times time derivative
  bad("u_t^2 = 0");                         // exponent on time derivative
  bad("(u^2)_t = 0");                       // time subscript on group
  bad("u_t*u_t = 0");                       // two time derivatives in a term
  bad("f(u)_t = 0");                        // time subscript on function factor
  bad("|u|_x = 0");                         // subscript on modulus
  bad("u/u = 0");                           // division by a field factor
  bad("1/0*u = 0");                         // division by zero
  bad("u + psi = 0");                       // mixed fields
  bad("sin'(u) = 0");                       // apostrophe on sin
  bad("f(c) = 0", {"c"});                   // non-field argument
  bad("u^m = 0");                           // undeclared exponent parameter
  bad("u = 0", {"sin"});                    // reserved name declared as parameter
  bad("u = 0", {"V"});                      // velocity symbol declared as parameter
}

TEST_CASE("parse errors carry position, line, and column") {
  try {
    parse_equation("u_t +\n w = 0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 2);
    CHECK(e.found == "w");
    CHECK(e.position == 7);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("mutated registry strings never parse silently") {
  // drop each single character that should break the grammar
  for (const auto& eq : kEquations) {
    Expr good = parse_equation(eq.src, eq.params);
    for (size_t i = 0; i < eq.src.size(); ++i) {
      char c = eq.src[i];
      if (c != '(' && c != ')' && c != '|' && c != '=') continue;
      std::string mutated = eq.src;
      mutated.erase(i, 1);
      CAPTURE(mutated);
      CHECK_THROWS_AS(parse_equation(mutated, eq.params), ParseError);
    }
  }
}
