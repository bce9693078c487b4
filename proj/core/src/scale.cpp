#include "osa/scale.hpp"

#include <algorithm>
#include <cmath>

#include "osa/errors.hpp"

namespace osa {
namespace {

Coefficient coeffPow(const Coefficient& c, int p) {
  Coefficient r = Coefficient::one();
  for (int i = 0; i < p; ++i) r = r * c;
  return r;
}

void mergeEvals(std::vector<FuncEval>& evals) {
  std::map<std::pair<char, int>, int> acc;
  for (const auto& e : evals) acc[{e.func, e.order}] += e.power;
  evals.clear();
  for (const auto& [k, p] : acc)
    if (p != 0) evals.push_back({k.first, k.second, p});
}

void mergeElems(std::vector<ElemEval>& evals) {
  std::map<bool, int> acc;
  for (const auto& e : evals) acc[e.isCos] += e.power;
  evals.clear();
  for (const auto& [k, p] : acc)
    if (p != 0) evals.push_back({k, p});
}

// Deterministic ordering proxy for symbolic exponents (params stand in as 10).
double surrogate(const ExponentExpr& e) {
  double v = static_cast<double>(e.constant);
  for (const auto& [k, c] : e.terms) v += 10.0 * static_cast<double>(c);
  return v;
}

bool termLess(const ScaleTerm& a, const ScaleTerm& b) {
  double la = surrogate(a.lPower), lb = surrogate(b.lPower);
  if (la != lb) return la > lb;
  if (a.vPower != b.vPower) return a.vPower > b.vPower;
  double aa = surrogate(a.aPower), ab = surrogate(b.aPower);
  if (aa != ab) return aa > ab;
  return a.fullKey() < b.fullKey();
}

std::string expSuffix(const ExponentExpr& p) {
  if (p == ExponentExpr(1)) return "";
  if (p.isConstant()) return "^" + std::to_string(p.constant);
  if (p.constant == 0 && p.terms.size() == 1 && p.terms.begin()->second == 1)
    return "^" + p.terms.begin()->first;
  return "^(" + p.str() + ")";
}

bool allNonPositive(const ExponentExpr& e) {
  if (e.constant > 0) return false;
  for (const auto& [k, v] : e.terms)
    if (v > 0) return false;
  return true;
}

}  // namespace

std::string ScaleTerm::signatureKey() const {
  std::string s = coeff.signatureKey();
  s += "|a" + aPower.key() + "|l" + lPower.key() + "|s" + sigmaPower.key() + "|v" +
       std::to_string(vPower);
  for (const auto& fe : funcEvals)
    s += "|F" + std::string(1, fe.func) + std::to_string(fe.order) + "^" +
         std::to_string(fe.power);
  for (const auto& ee : elemEvals)
    s += std::string("|E") + (ee.isCos ? "c" : "s") + "^" + std::to_string(ee.power);
  return s;
}

std::string ScaleTerm::fullKey() const { return coeff.rational.str() + "|" + signatureKey(); }

ScaleRelation canonicalizeRelation(const ScaleRelation& r) {
  std::vector<ScaleTerm> merged;
  std::map<std::string, size_t> index;
  for (const auto& t : r.terms) {
    std::string k = t.signatureKey();
    auto it = index.find(k);
    if (it == index.end()) {
      index[k] = merged.size();
      merged.push_back(t);
    } else {
      merged[it->second].coeff.rational = merged[it->second].coeff.rational + t.coeff.rational;
    }
  }
  std::vector<ScaleTerm> out;
  for (auto& t : merged)
    if (!t.coeff.rational.isZero()) out.push_back(std::move(t));
  std::sort(out.begin(), out.end(), termLess);
  ScaleRelation res;
  res.terms = std::move(out);
  res.mode = r.mode;
  res.imaginaryPart = r.imaginaryPart;
  return res;
}

ScaleRelation specialize_signs(const ScaleRelation& r, int sigma, int tau) {
  ScaleRelation out;
  out.mode = r.mode;
  out.imaginaryPart = r.imaginaryPart;
  for (ScaleTerm t : r.terms) {
    if (!t.sigmaPower.isZero()) {
      if (!t.sigmaPower.isConstant()) {
        if (sigma == -1)
          throw UnsupportedRHS("cannot specialize a symbolic sign power to -1");
      } else if (sigma == -1 && t.sigmaPower.constant % 2 == 1) {
        t.coeff.rational = -t.coeff.rational;
      }
      t.sigmaPower = ExponentExpr(0);
    }
    if (tau == -1 && t.vPower % 2 == 1) t.coeff.rational = -t.coeff.rational;
    out.terms.push_back(std::move(t));
  }
  return canonicalizeRelation(out);
}

Expr traveling_reduce(const Expr& e) {
  Expr out;
  out.field = e.field;
  out.monomials = e.monomials;
  for (const auto& td : e.timeDerivs) {
    Expr cur;
    cur.field = e.field;
    cur.monomials = {td.differentiand};
    int total = td.tOrder + td.xOrder;
    for (int k = 0; k < total; ++k) cur = differentiate_x(cur);
    Coefficient vc = Coefficient::param("V", ExponentExpr(static_cast<long>(td.tOrder)));
    if (td.tOrder % 2 == 1) vc.rational = -vc.rational;
    Expr vexpr;
    vexpr.field = e.field;
    vexpr.monomials.push_back(Monomial(vc));
    cur = multiply(vexpr, cur);
    out = add(out, cur);
  }
  return canonicalize(out);
}

std::vector<ScaleRelation> scale_substitute(const Expr& e, ScaleRelation::Mode mode) {
  if (!e.timeDerivs.empty())
    throw UnsupportedRHS("time derivatives present; apply the traveling reduction first");
  std::vector<ScaleTerm> realTerms, imagTerms;
  for (const auto& m : e.monomials) {
    ScaleTerm t;
    t.coeff = m.coeff;
    auto vit = t.coeff.params.find("V");
    if (vit != t.coeff.params.end()) {
      if (!vit->second.isConstant() || vit->second.constant < 0)
        throw UnsupportedRHS("velocity must enter with a nonnegative integer power");
      t.vPower = static_cast<int>(vit->second.constant);
      t.coeff.params.erase(vit);
    }
    ExponentExpr sigmaAcc(0);
    long iAcc = 0;
    for (const auto& f : m.factors) {
      switch (f.kind) {
        case Factor::Kind::FieldDeriv: {
          t.aPower += f.power;
          ExponentExpr kp = f.power * static_cast<long>(f.order);
          t.lPower = t.lPower - kp;
          sigmaAcc += kp;
          if (mode == ScaleRelation::Mode::Envelope && f.order > 0) {
            if (!kp.isConstant())
              throw UnsupportedRHS(
                  "envelope substitution needs concrete powers on derivative factors");
            iAcc += kp.constant;
          }
          break;
        }
        case Factor::Kind::Modulus:
          t.aPower += f.power;
          break;
        case Factor::Kind::FuncSym: {
          if (mode == ScaleRelation::Mode::Envelope)
            throw UnsupportedRHS("function symbols are not supported in envelope mode");
          if (!f.power.isConstant())
            throw UnsupportedRHS("function factors need integer powers");
          t.funcEvals.push_back(
              {f.func, f.order, static_cast<int>(f.power.constant)});
          break;
        }
        case Factor::Kind::Elementary: {
          if (mode == ScaleRelation::Mode::Envelope)
            throw UnsupportedRHS("sin/cos factors are not supported in envelope mode");
          if (!f.power.isConstant())
            throw UnsupportedRHS("sin/cos factors need integer powers");
          t.elemEvals.push_back({f.isCos, static_cast<int>(f.power.constant)});
          break;
        }
      }
    }
    t.sigmaPower = sigmaAcc.mod2();
    mergeEvals(t.funcEvals);
    mergeElems(t.elemEvals);
    if (mode == ScaleRelation::Mode::Envelope) {
      long ip = ((iAcc + t.coeff.imaginaryPower) % 4 + 4) % 4;
      t.coeff.imaginaryPower = 0;
      if (ip >= 2) {
        t.coeff.rational = -t.coeff.rational;
        ip -= 2;
      }
      (ip == 1 ? imagTerms : realTerms).push_back(t);
    } else {
      realTerms.push_back(t);
    }
  }

  std::vector<ScaleRelation> parts;
  ScaleRelation re;
  re.terms = realTerms;
  re.mode = mode;
  re = canonicalizeRelation(re);
  if (!re.terms.empty()) parts.push_back(re);
  if (mode == ScaleRelation::Mode::Envelope) {
    ScaleRelation im;
    im.terms = imagTerms;
    im.mode = mode;
    im.imaginaryPart = true;
    im = canonicalizeRelation(im);
    if (!im.terms.empty()) parts.push_back(im);
  }
  if (parts.empty()) throw EmptyRelation();
  return parts;
}

ScaleRelation normalize(const ScaleRelation& r0) {
  ScaleRelation r = canonicalizeRelation(r0);
  if (r.terms.empty()) throw EmptyRelation();
  ExponentExpr aMin = r.terms[0].aPower;
  ExponentExpr lMax = r.terms[0].lPower;
  ExponentExpr sMin = r.terms[0].sigmaPower.mod2();
  for (size_t i = 1; i < r.terms.size(); ++i) {
    aMin = ExponentExpr::min(aMin, r.terms[i].aPower);
    lMax = ExponentExpr::max(lMax, r.terms[i].lPower);
    sMin = ExponentExpr::min(sMin, r.terms[i].sigmaPower.mod2());
  }
  for (auto& t : r.terms) {
    t.aPower = t.aPower - aMin;
    t.lPower = t.lPower - lMax;
    t.sigmaPower = (t.sigmaPower - sMin).mod2();
  }
  return canonicalizeRelation(r);
}

std::complex<double> evaluateTerm(const ScaleTerm& t, const RelationBindings& b) {
  std::complex<double> v = t.coeff.evaluate(b.params);
  v *= std::pow(b.A, t.aPower.evaluate(b.params));
  v *= std::pow(b.L, t.lPower.evaluate(b.params));
  long si = std::lround(t.sigmaPower.evaluate(b.params));
  if (b.sigma < 0 && (((si % 2) + 2) % 2) == 1) v = -v;
  for (int k = 0; k < t.vPower; ++k) v *= b.V;
  for (const auto& fe : t.funcEvals) {
    auto it = b.funcEvals.find({fe.func, fe.order});
    if (it == b.funcEvals.end())
      throw UnboundSymbol(std::string(1, fe.func) + "(" + std::to_string(fe.order) + ")");
    v *= std::pow(it->second, fe.power);
  }
  for (const auto& ee : t.elemEvals)
    v *= std::pow(ee.isCos ? std::cos(b.A) : std::sin(b.A), ee.power);
  return v;
}

std::complex<double> evaluateRelation(const ScaleRelation& r, const RelationBindings& b) {
  std::complex<double> s = 0.0;
  for (const auto& t : r.terms) s += evaluateTerm(t, b);
  return s;
}

std::string renderTermBody(const ScaleTerm& t) {
  std::vector<std::string> mults, divs;
  if (t.coeff.imaginaryPower == 1) mults.push_back("i");
  Rational mag = t.coeff.rational.negative() ? -t.coeff.rational : t.coeff.rational;
  if (!mag.isOne()) mults.push_back(mag.str());
  for (const auto& [name, pw] : t.coeff.params) {
    if (pw.isConstant() && pw.constant < 0)
      divs.push_back(name + (pw.constant == -1 ? "" : "^" + std::to_string(-pw.constant)));
    else
      mults.push_back(name + expSuffix(pw));
  }
  if (!t.sigmaPower.isZero()) mults.push_back("sigma" + expSuffix(t.sigmaPower));
  if (t.vPower > 0)
    mults.push_back(t.vPower == 1 ? "V" : "V^" + std::to_string(t.vPower));
  if (!t.aPower.isZero()) {
    if (t.aPower.isConstant() && t.aPower.constant < 0)
      divs.push_back("A" + (t.aPower.constant == -1
                                ? std::string()
                                : "^" + std::to_string(-t.aPower.constant)));
    else
      mults.push_back("A" + expSuffix(t.aPower));
  }
  for (const auto& fe : t.funcEvals) {
    std::string fx(1, fe.func);
    fx += std::string(static_cast<size_t>(fe.order), '\'');
    fx += "(A)";
    if (fe.power != 1) fx += "^" + std::to_string(std::abs(fe.power));
    (fe.power < 0 ? divs : mults).push_back(fx);
  }
  for (const auto& ee : t.elemEvals) {
    std::string ex = ee.isCos ? "cos(A)" : "sin(A)";
    if (ee.power != 1) ex += "^" + std::to_string(std::abs(ee.power));
    (ee.power < 0 ? divs : mults).push_back(ex);
  }
  if (!t.lPower.isZero()) {
    if (allNonPositive(t.lPower))
      divs.push_back("L" + expSuffix(t.lPower * -1));
    else
      mults.push_back("L" + expSuffix(t.lPower));
  }
  std::string s;
  if (mults.empty()) {
    s = "1";
  } else {
    for (size_t i = 0; i < mults.size(); ++i) {
      if (i) s += "*";
      s += mults[i];
    }
  }
  for (const auto& d : divs) s += "/" + d;
  return s;
}

std::string renderTermList(const std::vector<ScaleTerm>& terms) {
  std::string s;
  for (size_t i = 0; i < terms.size(); ++i) {
    bool neg = terms[i].coeff.rational.negative();
    if (i == 0) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    s += renderTermBody(terms[i]);
  }
  return s;
}

std::string renderRelation(const ScaleRelation& r) {
  if (r.terms.empty()) return "0 = 0";
  return renderTermList(r.terms) + " = 0";
}

ScaleRelation apply_ansatz(const ScaleRelation& r, const Ansatz& a) {
  ScaleRelation out;
  out.mode = r.mode;
  for (ScaleTerm t : r.terms) {
    if (t.vPower > 0) {
      int v = t.vPower;
      t.coeff = t.coeff * coeffPow(a.coeff, v);
      if (a.kind == Ansatz::Kind::PowerLaw) {
        t.aPower += a.exponent * static_cast<long>(v);
      } else {
        t.funcEvals.push_back({'f', 1, v});
        mergeEvals(t.funcEvals);
      }
      t.vPower = 0;
    }
    out.terms.push_back(std::move(t));
  }
  return canonicalizeRelation(out);
}

}  // namespace osa
