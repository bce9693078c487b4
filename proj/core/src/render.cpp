#include <string>

#include "osa/parse.hpp"

namespace osa {
namespace {

// "^2", "^m", or "^(m-1)"; empty for power 1.
std::string powerSuffix(const ExponentExpr& p) {
  if (p == ExponentExpr(1)) return "";
  if (p.isConstant()) return "^" + std::to_string(p.constant);
  if (p.constant == 0 && p.terms.size() == 1 && p.terms.begin()->second == 1)
    return "^" + p.terms.begin()->first;
  return "^(" + p.str() + ")";
}

std::string factorText(const Factor& f, const std::string& field) {
  std::string s;
  switch (f.kind) {
    case Factor::Kind::FieldDeriv:
      s = field;
      if (f.order > 0) s += "_" + std::string(static_cast<size_t>(f.order), 'x');
      break;
    case Factor::Kind::FuncSym:
      s = std::string(1, f.func) + std::string(static_cast<size_t>(f.order), '\'') +
          "(" + field + ")";
      break;
    case Factor::Kind::Elementary:
      s = (f.isCos ? "cos(" : "sin(") + field + ")";
      break;
    case Factor::Kind::Modulus:
      s = "|" + field + "|";
      break;
  }
  return s + powerSuffix(f.power);
}

// Renders |coeff| * factors as "*"-joined parts with "/name^k" for negative
// constant parameter powers; returns the magnitude text (sign handled by caller).
std::string termBody(const Coefficient& c, const std::vector<std::string>& factorParts) {
  std::vector<std::string> mults;
  std::vector<std::string> divs;
  if (c.imaginaryPower == 1) mults.push_back("i");
  Rational mag = c.rational.negative() ? -c.rational : c.rational;
  if (!mag.isOne()) mults.push_back(mag.str());
  for (const auto& [name, p] : c.params) {
    if (p.isConstant() && p.constant < 0) {
      ExponentExpr np = p;
      np = np * -1;
      divs.push_back(name + powerSuffix(np));
    } else {
      mults.push_back(name + powerSuffix(p));
    }
  }
  std::string s;
  if (mults.empty() && !divs.empty()) s = "1";
  for (size_t i = 0; i < mults.size(); ++i) {
    if (i) s += "*";
    s += mults[i];
  }
  for (const auto& d : divs) s += "/" + d;
  for (const auto& fp : factorParts) {
    if (!s.empty()) s += "*";
    s += fp;
  }
  if (s.empty()) s = "1";
  return s;
}

}  // namespace

std::string render(const Expr& in) {
  Expr e = canonicalize(in);
  if (e.empty()) return "0 = 0";

  std::string out;
  bool first = true;
  auto emit = [&](bool negative, const std::string& body) {
    if (first) {
      if (negative) out += "-";
      first = false;
    } else {
      out += negative ? " - " : " + ";
    }
    out += body;
  };

  for (const auto& t : e.timeDerivs) {
    std::string sub = std::string(static_cast<size_t>(t.xOrder), 'x') +
                      std::string(static_cast<size_t>(t.tOrder), 't');
    std::string body =
        termBody(t.differentiand.coeff, {e.field + "_" + sub});
    emit(t.differentiand.coeff.rational.negative(), body);
  }
  for (const auto& m : e.monomials) {
    std::vector<std::string> parts;
    for (const auto& f : m.factors) parts.push_back(factorText(f, e.field));
    emit(m.coeff.rational.negative(), termBody(m.coeff, parts));
  }
  return out + " = 0";
}

}  // namespace osa
