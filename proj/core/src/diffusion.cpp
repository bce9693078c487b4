#include "osa/diffusion.hpp"

#include <algorithm>

#include "osa/errors.hpp"
#include "osa/parse.hpp"

namespace osa {
namespace {

// Extract (coefficient, power) pairs from a flux given as a sum of powers of u.
std::vector<DiffusionTerm> fluxMonomials(const Expr& e) {
  if (!e.timeDerivs.empty())
    throw UnsupportedRHS("a flux cannot contain time derivatives");
  std::vector<DiffusionTerm> out;
  for (const auto& m : e.monomials) {
    if (m.factors.empty()) {
      out.push_back({m.coeff, ExponentExpr(0)});
      continue;
    }
    if (m.factors.size() != 1 || m.factors[0].kind != Factor::Kind::FieldDeriv ||
        m.factors[0].order != 0)
      throw UnsupportedRHS("the flux must be a sum of powers of the field");
    out.push_back({m.coeff, m.factors[0].power});
  }
  return out;
}

Coefficient dividedByExponent(Coefficient c, const ExponentExpr& p) {
  if (p.isConstant()) {
    if (p.constant == 0) throw UnsupportedRHS("division by a zero exponent");
    c.rational = c.rational / Rational(p.constant);
    return c;
  }
  if (p.constant == 0 && p.terms.size() == 1 && p.terms.begin()->second == 1) {
    c.mulParam(p.terms.begin()->first, ExponentExpr(-1));
    return c;
  }
  throw UnsupportedRHS("cannot divide a coefficient by the compound exponent " + p.str());
}

// Multiply by a (possibly symbolic) exponent, distributing into one
// coefficient per linear component.
std::vector<Coefficient> multipliedByExponent(const Coefficient& c, const ExponentExpr& p) {
  std::vector<Coefficient> out;
  if (p.constant != 0) {
    Coefficient piece = c;
    piece.rational = piece.rational * Rational(p.constant);
    out.push_back(piece);
  }
  for (const auto& [name, coeff] : p.terms) {
    Coefficient piece = c;
    piece.rational = piece.rational * Rational(coeff);
    piece.mulParam(name, ExponentExpr(1));
    out.push_back(piece);
  }
  return out;
}

std::string coeffText(const Coefficient& c) {
  std::vector<std::string> mults, divs;
  Rational mag = c.rational.negative() ? -c.rational : c.rational;
  if (!mag.isOne()) mults.push_back(mag.str());
  for (const auto& [name, pw] : c.params) {
    if (pw.isConstant() && pw.constant < 0)
      divs.push_back(name + (pw.constant == -1 ? "" : "^" + std::to_string(-pw.constant)));
    else if (pw.isConstant())
      mults.push_back(name + (pw.constant == 1 ? "" : "^" + std::to_string(pw.constant)));
    else
      mults.push_back(name + "^(" + pw.str() + ")");
  }
  std::string s;
  if (mults.empty())
    s = "1";
  else
    for (size_t i = 0; i < mults.size(); ++i) s += (i ? "*" : "") + mults[i];
  for (const auto& d : divs) s += "/" + d;
  return s;
}

std::string powerSuffixText(const ExponentExpr& p) {
  if (p == ExponentExpr(1)) return "";
  if (p.isConstant()) return "^" + std::to_string(p.constant);
  if (p.constant == 0 && p.terms.size() == 1 && p.terms.begin()->second == 1)
    return "^" + p.terms.begin()->first;
  return "^(" + p.str() + ")";
}

}  // namespace

DiffusionResult compatible_diffusion(const Expr& f, const Expr& h,
                                     const std::string& widthName,
                                     const std::string& v0Name) {
  DiffusionResult res;
  // f-monomial c*u^p: the profile equation carries L^2*c*p*(1-V0)*u^(p-1);
  // two quadratures against (u*g')' yield -L*c*(1-V0)/p * u^p.
  for (const auto& [c, p] : fluxMonomials(f)) {
    if (p.isConstant() && p.constant == 0) continue;  // constant flux: f' = 0
    Coefficient base = c;
    base.mulParam(widthName, ExponentExpr(1));
    base = dividedByExponent(base, p);
    DiffusionTerm t1{-base, p};
    Coefficient withV = base;
    withV.mulParam(v0Name, ExponentExpr(1));
    DiffusionTerm t2{withV, p};
    res.powerTerms.push_back(t1);
    res.powerTerms.push_back(t2);
  }
  // h-monomial c*u^p: carries c*p^3*u^(p-1); quadratures yield -(c*p/L)*u^p.
  for (const auto& [c, p] : fluxMonomials(h)) {
    if (p.isConstant() && p.constant == 0) continue;
    Coefficient base = c;
    base.mulParam(widthName, ExponentExpr(-1));
    for (const auto& piece : multipliedByExponent(base, p))
      res.powerTerms.push_back({-piece, p});
  }
  // Drop exact zeros and merge identical signatures at equal powers.
  std::vector<DiffusionTerm> merged;
  for (const auto& t : res.powerTerms) {
    if (t.coeff.isZero()) continue;
    bool found = false;
    for (auto& m : merged) {
      if (m.power == t.power && m.coeff.sameSignature(t.coeff)) {
        m.coeff.rational = m.coeff.rational + t.coeff.rational;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const DiffusionTerm& t) { return t.coeff.isZero(); }),
               merged.end());
  res.powerTerms = std::move(merged);

  std::string s = "g(u) = ";
  for (size_t i = 0; i < res.powerTerms.size(); ++i) {
    const auto& t = res.powerTerms[i];
    bool neg = t.coeff.rational.negative();
    if (i == 0) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    s += coeffText(t.coeff) + "*u" + powerSuffixText(t.power);
  }
  if (res.powerTerms.empty()) s += "0";
  s += " + " + res.logCoefficient + "*log(u) + " + res.constantName;
  res.rendered = s;
  return res;
}

Expr profile_residual(const Expr& f, const Expr& h, const DiffusionResult& g,
                      const std::string& widthName, const std::string& v0Name) {
  const std::string& field = f.field;
  auto coeffExpr = [&](const Coefficient& c) {
    Expr e;
    e.field = field;
    e.monomials.push_back(Monomial(c));
    return e;
  };
  auto powerExpr = [&](const ExponentExpr& p) {
    Expr e;
    e.field = field;
    e.monomials.push_back(Monomial(Coefficient::one(), {Factor::fieldDeriv(0, p)}));
    return e;
  };

  // g' = sum(coeff * p * u^(p-1)) + C3/u, built via differentiate_u.
  Expr gPow;
  gPow.field = field;
  for (const auto& t : g.powerTerms)
    gPow.monomials.push_back(Monomial(t.coeff, {Factor::fieldDeriv(0, t.power)}));
  Expr g1 = differentiate_u(gPow);
  g1 = add(g1, Expr{{Monomial(Coefficient::param(g.logCoefficient),
                              {Factor::fieldDeriv(0, ExponentExpr(-1))})},
                    {},
                    field});
  Expr g2 = differentiate_u(g1);

  Expr f1 = differentiate_u(f);
  Expr h1 = differentiate_u(h);
  Expr h2 = differentiate_u(h1);
  Expr h3 = differentiate_u(h2);

  // L^2*(1 - V0)*f'
  Coefficient L2 = Coefficient::param(widthName, ExponentExpr(2));
  Coefficient L2V = L2;
  L2V.mulParam(v0Name, ExponentExpr(1));
  Expr part1 = multiply(add(coeffExpr(L2), negate(coeffExpr(L2V))), f1);
  // L*(u*g'' + g')
  Coefficient L1 = Coefficient::param(widthName, ExponentExpr(1));
  Expr ug2 = multiply(powerExpr(ExponentExpr(1)), g2);
  Expr part2 = multiply(coeffExpr(L1), add(ug2, g1));
  // u^2*h''' + 3*u*h'' + h'
  Expr u2h3 = multiply(powerExpr(ExponentExpr(2)), h3);
  Expr uh2 = multiply(powerExpr(ExponentExpr(1)), h2);
  Expr part3 = add(add(u2h3, multiply(coeffExpr(Coefficient(Rational(3))), uh2)), h1);

  return canonicalize(add(add(part1, part2), part3));
}

ScaleRelation fgh_relation() {
  Expr e = parse_equation("u_t + f(u)_x + g(u)_xx + h(u)_xxx = 0");
  Expr reduced = traveling_reduce(e);
  auto parts = scale_substitute(reduced, ScaleRelation::Mode::Real);
  return normalize(parts.at(0));
}

}  // namespace osa
