#include "osa/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "osa/errors.hpp"

namespace osa {

std::string Factor::slotKey() const {
  char buf[48];
  switch (kind) {
    case Kind::FieldDeriv:
      std::snprintf(buf, sizeof(buf), "D%04d", order);
      return buf;
    case Kind::FuncSym:
      std::snprintf(buf, sizeof(buf), "F%c%04d", func, order);
      return buf;
    case Kind::Elementary:
      return isCos ? "Ecos" : "Esin";
    case Kind::Modulus:
      return "M";
  }
  return "?";
}

void Monomial::canonicalizeFactors() {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.slotKey() < b.slotKey(); });
  std::vector<Factor> merged;
  for (auto& f : factors) {
    if (!merged.empty() && merged.back().slotKey() == f.slotKey()) {
      merged.back().power += f.power;
    } else {
      merged.push_back(f);
    }
  }
  factors.clear();
  for (auto& f : merged) {
    if (!f.power.isZero()) factors.push_back(f);
  }
}

Monomial Monomial::times(const Monomial& o) const {
  Monomial r;
  r.coeff = coeff * o.coeff;
  r.factors = factors;
  r.factors.insert(r.factors.end(), o.factors.begin(), o.factors.end());
  r.canonicalizeFactors();
  return r;
}

std::string Monomial::mergeKey() const {
  std::string s;
  for (const auto& f : factors) s += f.key() + ";";
  s += "|" + coeff.signatureKey();
  return s;
}

std::string Monomial::key() const {
  std::string s;
  for (const auto& f : factors) s += f.key() + ";";
  s += "|" + coeff.key();
  return s;
}

std::string TimeDeriv::mergeKey() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "T%dX%d|", tOrder, xOrder);
  return buf + differentiand.mergeKey();
}

namespace detail {

std::vector<Monomial> scaleByExponent(const Monomial& m, const ExponentExpr& e) {
  std::vector<Monomial> out;
  if (e.constant != 0) {
    Monomial p = m;
    p.coeff.rational = p.coeff.rational * Rational(e.constant);
    if (!p.coeff.isZero()) out.push_back(std::move(p));
  }
  for (const auto& [name, k] : e.terms) {
    if (k == 0) continue;
    Monomial p = m;
    p.coeff.rational = p.coeff.rational * Rational(k);
    p.coeff.mulParam(name, ExponentExpr(1));
    if (!p.coeff.isZero()) out.push_back(std::move(p));
  }
  return out;
}

static std::complex<double> cpow(const std::complex<double>& z, double e) {
  double r = std::round(e);
  if (std::abs(e - r) < 1e-9 && std::abs(r) < 1e9) {
    long n = static_cast<long>(r);
    if (n == 0) return {1.0, 0.0};
    bool inv = n < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    std::complex<double> base = z, acc{1.0, 0.0};
    while (k) {
      if (k & 1UL) acc *= base;
      base *= base;
      k >>= 1UL;
    }
    return inv ? 1.0 / acc : acc;
  }
  return std::pow(z, std::complex<double>(e, 0.0));
}

std::complex<double> evaluateMonomial(const Monomial& m, const Bindings& b) {
  std::complex<double> v = m.coeff.evaluate(b.params);
  for (const auto& f : m.factors) {
    double p = f.power.evaluate(b.params);
    switch (f.kind) {
      case Factor::Kind::FieldDeriv: {
        if (f.order < 0 || static_cast<size_t>(f.order) >= b.fieldDerivs.size())
          throw UnboundSymbol("field derivative of order " + std::to_string(f.order) +
                              " is not bound");
        v *= cpow(b.fieldDerivs[static_cast<size_t>(f.order)], p);
        break;
      }
      case Factor::Kind::FuncSym: {
        auto it = b.funcEvals.find({f.func, f.order});
        if (it == b.funcEvals.end())
          throw UnboundSymbol(std::string("function value ") + f.func + "^(" +
                              std::to_string(f.order) + ") is not bound");
        v *= cpow(it->second, p);
        break;
      }
      case Factor::Kind::Elementary: {
        if (b.fieldDerivs.empty()) throw UnboundSymbol("field value is not bound");
        std::complex<double> u = b.fieldDerivs[0];
        v *= cpow(f.isCos ? std::cos(u) : std::sin(u), p);
        break;
      }
      case Factor::Kind::Modulus: {
        if (b.fieldDerivs.empty()) throw UnboundSymbol("field value is not bound");
        v *= std::pow(std::abs(b.fieldDerivs[0]), p);
        break;
      }
    }
  }
  return v;
}

}  // namespace detail

Expr canonicalize(const Expr& e) {
  Expr r;
  r.field = e.field;

  std::vector<Monomial> ms = e.monomials;
  for (auto& m : ms) m.canonicalizeFactors();
  std::sort(ms.begin(), ms.end(),
            [](const Monomial& a, const Monomial& b) { return a.mergeKey() < b.mergeKey(); });
  for (auto& m : ms) {
    if (m.coeff.isZero()) continue;
    if (!r.monomials.empty() && r.monomials.back().mergeKey() == m.mergeKey()) {
      r.monomials.back().coeff.rational = r.monomials.back().coeff.rational + m.coeff.rational;
    } else {
      r.monomials.push_back(std::move(m));
    }
  }
  r.monomials.erase(std::remove_if(r.monomials.begin(), r.monomials.end(),
                                   [](const Monomial& m) { return m.coeff.isZero(); }),
                    r.monomials.end());

  std::vector<TimeDeriv> ts = e.timeDerivs;
  for (auto& t : ts) t.differentiand.canonicalizeFactors();
  std::sort(ts.begin(), ts.end(),
            [](const TimeDeriv& a, const TimeDeriv& b) { return a.mergeKey() < b.mergeKey(); });
  for (auto& t : ts) {
    if (t.differentiand.coeff.isZero()) continue;
    if (!r.timeDerivs.empty() && r.timeDerivs.back().mergeKey() == t.mergeKey()) {
      r.timeDerivs.back().differentiand.coeff.rational =
          r.timeDerivs.back().differentiand.coeff.rational + t.differentiand.coeff.rational;
    } else {
      r.timeDerivs.push_back(std::move(t));
    }
  }
  r.timeDerivs.erase(std::remove_if(r.timeDerivs.begin(), r.timeDerivs.end(),
                                    [](const TimeDeriv& t) {
                                      return t.differentiand.coeff.isZero();
                                    }),
                     r.timeDerivs.end());
  return r;
}

Expr add(const Expr& a, const Expr& b) {
  Expr r;
  r.field = a.field.empty() ? b.field : a.field;
  r.monomials = a.monomials;
  r.monomials.insert(r.monomials.end(), b.monomials.begin(), b.monomials.end());
  r.timeDerivs = a.timeDerivs;
  r.timeDerivs.insert(r.timeDerivs.end(), b.timeDerivs.begin(), b.timeDerivs.end());
  return canonicalize(r);
}

Expr negate(const Expr& e) {
  Expr r = e;
  for (auto& m : r.monomials) m.coeff = -m.coeff;
  for (auto& t : r.timeDerivs) t.differentiand.coeff = -t.differentiand.coeff;
  return r;
}

Expr multiply(const Expr& a, const Expr& b) {
  auto pureCoefficient = [](const Expr& e) {
    if (!e.timeDerivs.empty()) return false;
    for (const auto& m : e.monomials)
      if (!m.factors.empty()) return false;
    return true;
  };
  if (!a.timeDerivs.empty() || !b.timeDerivs.empty()) {
    const Expr& td = a.timeDerivs.empty() ? b : a;
    const Expr& other = a.timeDerivs.empty() ? a : b;
    if (!pureCoefficient(other))
      throw UnsupportedRHS("time-derivative factors cannot be multiplied by field factors");
    Expr r;
    r.field = td.field.empty() ? other.field : td.field;
    for (const auto& c : other.monomials) {
      for (const auto& t : td.timeDerivs) {
        TimeDeriv nt = t;
        nt.differentiand.coeff = nt.differentiand.coeff * c.coeff;
        r.timeDerivs.push_back(std::move(nt));
      }
      for (const auto& m : td.monomials) r.monomials.push_back(m.times(c));
    }
    return canonicalize(r);
  }
  Expr r;
  r.field = a.field.empty() ? b.field : a.field;
  for (const auto& ma : a.monomials)
    for (const auto& mb : b.monomials) r.monomials.push_back(ma.times(mb));
  return canonicalize(r);
}

Expr differentiate_x(const Expr& e) {
  if (!e.timeDerivs.empty())
    throw UnsupportedRHS("cannot take an x-derivative of a time-derivative term");
  Expr r;
  r.field = e.field;
  for (const auto& m : e.monomials) {
    for (size_t i = 0; i < m.factors.size(); ++i) {
      const Factor& f = m.factors[i];
      // Derivative of the i-th factor, times the remaining factors.
      Monomial rest;
      rest.coeff = m.coeff;
      for (size_t j = 0; j < m.factors.size(); ++j)
        if (j != i) rest.factors.push_back(m.factors[j]);

      switch (f.kind) {
        case Factor::Kind::FieldDeriv: {
          // d/dx (u^(k))^p = p * (u^(k))^(p-1) * u^(k+1)
          Monomial base = rest;
          Factor lowered = f;
          lowered.power = f.power;
          lowered.power += ExponentExpr(-1);
          if (!lowered.power.isZero()) base.factors.push_back(lowered);
          base.factors.push_back(Factor::fieldDeriv(f.order + 1));
          for (auto& piece : detail::scaleByExponent(base, f.power)) {
            piece.canonicalizeFactors();
            r.monomials.push_back(std::move(piece));
          }
          break;
        }
        case Factor::Kind::FuncSym: {
          // d/dx (phi^(r)(u))^p = p * (phi^(r))^(p-1) * phi^(r+1)(u) * u_x
          Monomial base = rest;
          Factor lowered = f;
          lowered.power += ExponentExpr(-1);
          if (!lowered.power.isZero()) base.factors.push_back(lowered);
          base.factors.push_back(Factor::funcSym(f.func, f.order + 1));
          base.factors.push_back(Factor::fieldDeriv(1));
          for (auto& piece : detail::scaleByExponent(base, f.power)) {
            piece.canonicalizeFactors();
            r.monomials.push_back(std::move(piece));
          }
          break;
        }
        case Factor::Kind::Elementary: {
          // d/dx sin^p(u) = p sin^(p-1) cos(u) u_x ; cos^p -> -p cos^(p-1) sin(u) u_x
          Monomial base = rest;
          Factor lowered = f;
          lowered.power += ExponentExpr(-1);
          if (!lowered.power.isZero()) base.factors.push_back(lowered);
          base.factors.push_back(Factor::elementary(!f.isCos));
          base.factors.push_back(Factor::fieldDeriv(1));
          if (f.isCos) base.coeff = -base.coeff;
          for (auto& piece : detail::scaleByExponent(base, f.power)) {
            piece.canonicalizeFactors();
            r.monomials.push_back(std::move(piece));
          }
          break;
        }
        case Factor::Kind::Modulus:
          throw ModulusNotDifferentiable();
      }
    }
  }
  return canonicalize(r);
}

std::complex<double> evaluate(const Expr& e, const Bindings& b) {
  std::complex<double> v{0.0, 0.0};
  for (const auto& m : e.monomials) v += detail::evaluateMonomial(m, b);
  for (const auto& t : e.timeDerivs) {
    auto it = b.timeFieldDerivs.find({t.tOrder, t.xOrder});
    if (it == b.timeFieldDerivs.end())
      throw UnboundSymbol("time derivative of order (" + std::to_string(t.tOrder) + "," +
                          std::to_string(t.xOrder) + ") is not bound");
    // The differentiand is coeff * u^1; the binding supplies the derivative of u itself.
    v += t.differentiand.coeff.evaluate(b.params) * it->second;
  }
  return v;
}

Expr substitute_param(const Expr& e, const std::string& name, long value) {
  Expr r;
  r.field = e.field;
  for (const auto& m : e.monomials) {
    Monomial n;
    n.coeff = m.coeff.substituted(name, value);
    for (const auto& f : m.factors) {
      Factor g = f;
      g.power = f.power.substituted(name, value);
      n.factors.push_back(std::move(g));
    }
    n.canonicalizeFactors();
    r.monomials.push_back(std::move(n));
  }
  for (const auto& t : e.timeDerivs) {
    TimeDeriv n = t;
    n.differentiand.coeff = t.differentiand.coeff.substituted(name, value);
    r.timeDerivs.push_back(std::move(n));
  }
  return canonicalize(r);
}

bool structurallyEqual(const Expr& a, const Expr& b) {
  Expr ca = canonicalize(a), cb = canonicalize(b);
  if (ca.field != cb.field) return false;
  if (ca.monomials.size() != cb.monomials.size()) return false;
  if (ca.timeDerivs.size() != cb.timeDerivs.size()) return false;
  for (size_t i = 0; i < ca.monomials.size(); ++i)
    if (ca.monomials[i].key() != cb.monomials[i].key()) return false;
  for (size_t i = 0; i < ca.timeDerivs.size(); ++i) {
    if (ca.timeDerivs[i].tOrder != cb.timeDerivs[i].tOrder) return false;
    if (ca.timeDerivs[i].xOrder != cb.timeDerivs[i].xOrder) return false;
    if (ca.timeDerivs[i].differentiand.key() != cb.timeDerivs[i].differentiand.key())
      return false;
  }
  return true;
}

Expr differentiate_u(const Expr& e) {
  if (!e.timeDerivs.empty())
    throw UnsupportedRHS("cannot take a field derivative of a time-derivative term");
  Expr r;
  r.field = e.field;
  for (const auto& m : e.monomials) {
    for (const auto& f : m.factors) {
      if (f.kind != Factor::Kind::FieldDeriv || f.order != 0)
        throw UnsupportedRHS("field derivative is defined only for powers of the field");
    }
    if (m.factors.empty()) continue;  // constant term differentiates away
    const Factor& f = m.factors[0];
    Monomial base;
    base.coeff = m.coeff;
    Factor lowered = f;
    lowered.power += ExponentExpr(-1);
    if (!lowered.power.isZero()) base.factors.push_back(lowered);
    for (auto& piece : detail::scaleByExponent(base, f.power)) {
      piece.canonicalizeFactors();
      r.monomials.push_back(std::move(piece));
    }
  }
  return canonicalize(r);
}

}  // namespace osa
