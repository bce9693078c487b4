#include "osa/solve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <random>
#include <set>

#include "osa/errors.hpp"

namespace osa {
namespace {

constexpr const char* kPlusMinus = "±";   // ±
constexpr const char* kMinusPlus = "∓";   // ∓

std::vector<ScaleTerm> negated(std::vector<ScaleTerm> terms) {
  for (auto& t : terms) t.coeff.rational = -t.coeff.rational;
  return terms;
}

bool hasVelocity(const std::vector<ScaleTerm>& terms) {
  for (const auto& t : terms)
    if (t.vPower > 0) return true;
  return false;
}

std::string wrapDiv(const std::string& s) {
  bool simple = !s.empty();
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) simple = false;
  return simple ? s : "(" + s + ")";
}

std::string rootSuffix(long g, bool inverse) {
  if (g == 1) return "";
  std::string s = "^(";
  if (inverse) s += "-";
  s += "1/" + std::to_string(g) + ")";
  return s;
}

// Render a +-merged term list: the two lists must align term-by-term and
// differ only in signs at some positions.
std::string renderTermListPM(const std::vector<ScaleTerm>& plus,
                             const std::vector<ScaleTerm>& minus) {
  std::string s;
  int firstDiffDir = 0;  // +1: plus-list positive at first difference
  for (size_t i = 0; i < plus.size(); ++i) {
    bool np = plus[i].coeff.rational.negative();
    bool nm = minus[i].coeff.rational.negative();
    std::string sep;
    if (np == nm) {
      sep = np ? " - " : " + ";
      if (i == 0) sep = np ? "-" : "";
    } else {
      int dir = np ? -1 : +1;
      if (firstDiffDir == 0) firstDiffDir = dir;
      const char* sym = (dir == firstDiffDir) ? kPlusMinus : kMinusPlus;
      sep = (i == 0) ? std::string(sym) : " " + std::string(sym) + " ";
    }
    s += sep + renderTermBody(plus[i]);
  }
  return s;
}

struct LinearParts {
  std::vector<ScaleTerm> num, den;
};

// x = -c0/c1 with the denominator sign-normalized (first term positive); for
// even root order the overall sign is dropped (width is a magnitude).
LinearParts linearParts(const std::vector<ScaleTerm>& c1, const std::vector<ScaleTerm>& c0,
                        long g) {
  LinearParts p;
  p.num = negated(c0);
  p.den = c1;
  if (!p.den.empty() && p.den.front().coeff.rational.negative()) {
    p.den = negated(p.den);
    p.num = negated(p.num);
  }
  if (g % 2 == 0 && !p.num.empty() && p.num.front().coeff.rational.negative())
    p.num = negated(p.num);
  return p;
}

std::string renderLinear(const std::string& numText, const std::string& denText, long g) {
  std::string den = (g % 2 == 0) ? "|" + denText + "|" : wrapDiv(denText);
  if (numText == "1") {
    if (g == 1) return "L = 1/" + den;
    return "L = " + den + rootSuffix(g, true);
  }
  std::string num = numText;
  if (num.find(" + ") != std::string::npos || num.find(" - ") != std::string::npos ||
      num.find(' ') != std::string::npos)
    num = "(" + num + ")";
  if (g == 1) return "L = " + num + "/" + den;
  return "L = (" + num + "/" + den + ")" + rootSuffix(g, false);
}

std::string renderQuadratic(const std::string& c2t, const std::string& c1t,
                            const std::string& c0t, long g, int root,
                            const std::string& pmOverride = "") {
  std::string sign = !pmOverride.empty() ? pmOverride : (root > 0 ? "+" : "-");
  std::string body = "(-(" + c1t + ") " + sign + " sqrt((" + c1t + ")^2 - 4*(" + c2t +
                     ")*(" + c0t + ")))/(2*(" + c2t + "))";
  if (g == 1) return "L = " + body;
  return "L = |" + body + "|" + rootSuffix(g, false);
}

std::string renderConstraint(const std::vector<ScaleTerm>& terms) {
  std::set<int> vset;
  for (const auto& t : terms) vset.insert(t.vPower);
  bool onlyV = true;
  for (const auto& t : terms)
    if (t.vPower == 0) onlyV = false;
  if (onlyV && !terms.empty()) return "V = 0";
  int vmax = *vset.rbegin();
  if (vmax >= 1 && vset.size() == 2 && vset.count(0)) {
    std::vector<ScaleTerm> lead, rest;
    for (auto t : terms) {
      if (t.vPower == vmax) {
        t.vPower = 0;
        lead.push_back(t);
      } else {
        rest.push_back(t);
      }
    }
    std::string lhs = vmax == 1 ? "V" : "V^" + std::to_string(vmax);
    std::vector<ScaleTerm> num = negated(rest);
    if (lead.size() == 1 && lead.front().funcEvals.empty() &&
        lead.front().elemEvals.empty() && lead.front().coeff.imaginaryPower == 0) {
      // A single lead term divides through exactly.
      const ScaleTerm& lt = lead.front();
      std::vector<ScaleTerm> rhs;
      for (auto t : num) {
        t.coeff.rational = t.coeff.rational / lt.coeff.rational;
        for (const auto& [k, v] : lt.coeff.params) t.coeff.mulParam(k, v * -1);
        t.aPower = t.aPower - lt.aPower;
        t.lPower = t.lPower - lt.lPower;
        t.sigmaPower = (t.sigmaPower - lt.sigmaPower).mod2();
        rhs.push_back(t);
      }
      return lhs + " = " + renderTermList(rhs);
    }
    std::string denText = renderTermList(lead);
    if (!num.empty() && num.front().coeff.rational.negative() &&
        !lead.empty() && lead.front().coeff.rational.negative()) {
      num = negated(num);
      denText = renderTermList(negated(lead));
    }
    return lhs + " = (" + renderTermList(num) + ")/" + wrapDiv(denText);
  }
  return renderTermList(terms) + " = 0";
}

std::complex<double> evalList(const std::vector<ScaleTerm>& terms, const RelationBindings& b) {
  std::complex<double> s = 0.0;
  for (const auto& t : terms) s += evaluateTerm(t, b);
  return s;
}

// Collect every parameter and function symbol the branch coefficients mention.
void collectSymbols(const std::vector<ScaleTerm>& terms, std::set<std::string>& params,
                    std::set<std::pair<char, int>>& funcs) {
  for (const auto& t : terms) {
    for (const auto& [k, v] : t.coeff.params) {
      params.insert(k);
      for (const auto& [pk, pv] : v.terms) params.insert(pk);
    }
    for (const auto& [pk, pv] : t.aPower.terms) params.insert(pk);
    for (const auto& [pk, pv] : t.lPower.terms) params.insert(pk);
    for (const auto& fe : t.funcEvals) funcs.insert({fe.func, fe.order});
  }
}

std::vector<RelationBindings> probeDraws(const BranchSolution& br) {
  std::set<std::string> names;
  std::set<std::pair<char, int>> funcs;
  collectSymbols(br.c2, names, funcs);
  collectSymbols(br.c1, names, funcs);
  collectSymbols(br.c0, names, funcs);
  std::mt19937 rng(916237u);
  std::uniform_real_distribution<double> uA(0.3, 2.3);
  std::uniform_real_distribution<double> uV(0.2, 3.2);
  std::uniform_real_distribution<double> uP(1.4, 3.4);
  std::uniform_real_distribution<double> uF(0.5, 2.0);
  std::vector<RelationBindings> draws;
  for (int d = 0; d < 8; ++d) {
    RelationBindings b;
    b.A = uA(rng);
    b.V = uV(rng);
    b.L = 1.0;
    for (const auto& n : names) b.params[n] = uP(rng);
    for (const auto& f : funcs) b.funcEvals[f] = uF(rng);
    draws.push_back(std::move(b));
  }
  return draws;
}

std::string fingerprint(const BranchSolution& br) {
  std::string fp;
  for (const auto& b : probeDraws(br)) {
    double v = branchAbsL(br, b, false);
    char buf[40];
    if (std::isnan(v))
      std::snprintf(buf, sizeof buf, "nan");
    else
      std::snprintf(buf, sizeof buf, "%.9e", v);
    fp += buf;
    fp += ";";
  }
  return fp;
}

// How many probe points admit the branch as a genuine (real, positive) width.
// Fingerprint twins keep the representative that is admissible most often.
int admissibleCount(const BranchSolution& br) {
  int count = 0;
  for (const auto& b : probeDraws(br))
    if (!std::isnan(branchAbsL(br, b, true))) ++count;
  return count;
}

}  // namespace

double branchAbsL(const BranchSolution& br, const RelationBindings& b,
                  bool requirePositiveRealRoot) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (br.kind != BranchSolution::Kind::Explicit) return nan;
  std::complex<double> x;
  if (!br.quadratic) {
    std::complex<double> c1v = evalList(br.c1, b), c0v = evalList(br.c0, b);
    if (std::abs(c1v) < 5e-2) return nan;
    x = -c0v / c1v;
  } else {
    std::complex<double> c2v = evalList(br.c2, b), c1v = evalList(br.c1, b),
                         c0v = evalList(br.c0, b);
    if (std::abs(c2v) < 5e-2) return nan;
    std::complex<double> disc = c1v * c1v - 4.0 * c2v * c0v;
    if (std::abs(disc) < 5e-2) return nan;
    int root = 1;
    auto it = br.signChoices.find("root");
    if (it != br.signChoices.end()) root = it->second;
    x = (-c1v + static_cast<double>(root) * std::sqrt(disc)) / (2.0 * c2v);
  }
  if (requirePositiveRealRoot) {
    // A genuine width needs L^g real and positive, whatever the parity of g.
    if (std::abs(x.imag()) > 1e-9 * (1.0 + std::abs(x))) return nan;
    double xr = x.real();
    if (xr < 1e-10) return nan;
    return std::pow(xr, 1.0 / static_cast<double>(br.gPower));
  }
  double m = std::abs(x);
  if (m < 1e-300) return nan;
  return std::pow(m, 1.0 / static_cast<double>(br.gPower));
}

std::vector<BranchSolution> solve_for_L(const ScaleRelation& relation) {
  ScaleRelation rel = normalize(relation);
  if (rel.terms.empty()) throw EmptyRelation();

  bool hasL = false, symbolicL = false, symbolicSigma = false, hasSigma = false;
  for (const auto& t : rel.terms) {
    if (!t.lPower.isZero()) hasL = true;
    if (!t.lPower.isConstant()) symbolicL = true;
    if (!t.sigmaPower.isZero()) hasSigma = true;
    if (!t.sigmaPower.isConstant()) symbolicSigma = true;
  }

  if (!hasL) {
    bool structure = false;
    for (const auto& t : rel.terms)
      if (t.vPower > 0 || !t.aPower.isZero() || !t.funcEvals.empty() ||
          !t.elemEvals.empty())
        structure = true;
    if (!structure)
      throw DegenerateRelation(
          "the relation reduces to a constant with no amplitude, width, or velocity "
          "dependence");
    BranchSolution br;
    br.kind = BranchSolution::Kind::Constraint;
    br.expression = renderConstraint(rel.terms);
    br.validity = "holds for arbitrary A and L";
    br.specialized = rel;
    int vmax = 0;
    for (const auto& t : rel.terms) vmax = std::max(vmax, t.vPower);
    for (auto t : rel.terms) {
      if (t.vPower == vmax && vmax > 0) {
        br.c1.push_back(t);
      } else {
        br.c0.push_back(t);
      }
    }
    return {br};
  }

  if (symbolicL) {
    BranchSolution br;
    br.kind = BranchSolution::Kind::Implicit;
    br.expression = renderRelation(rel);
    br.validity = "the width enters with a symbolic exponent; no closed form extracted";
    br.specialized = rel;
    return {br};
  }

  // Clear width denominators: multiply by L^(-minL).
  long minL = 0;
  for (const auto& t : rel.terms) minL = std::min(minL, t.lPower.constant);
  ScaleRelation cleared = rel;
  for (auto& t : cleared.terms) t.lPower = t.lPower - ExponentExpr(minL);
  std::set<long> powers;
  for (const auto& t : cleared.terms) powers.insert(t.lPower.constant);

  long g = 0;
  bool quad = false;
  bool structured = false;
  if (powers.size() == 2 && powers.count(0)) {
    g = *powers.rbegin();
    structured = true;
  } else if (powers.size() == 3 && powers.count(0)) {
    auto it = powers.begin();
    ++it;
    long s1 = *it;
    ++it;
    long s2 = *it;
    if (s2 == 2 * s1) {
      g = s1;
      quad = true;
      structured = true;
    }
  }
  if (!structured) {
    BranchSolution br;
    br.kind = BranchSolution::Kind::Implicit;
    br.expression = renderRelation(rel);
    br.validity = "the width powers do not form a linear or quadratic pattern";
    br.specialized = rel;
    return {br};
  }

  bool hasV = hasVelocity(rel.terms);
  std::vector<int> sigmas = (hasSigma && !symbolicSigma) ? std::vector<int>{+1, -1}
                                                         : std::vector<int>{+1};
  std::vector<int> taus = hasV ? std::vector<int>{+1, -1} : std::vector<int>{+1};
  std::vector<int> roots = quad ? std::vector<int>{+1, -1} : std::vector<int>{+1};

  std::vector<BranchSolution> out;
  std::map<std::string, size_t> seen;  // fingerprint -> index into out
  std::vector<int> outAdmissible;
  for (int sg : sigmas) {
    for (int tau : taus) {
      for (int root : roots) {
        ScaleRelation spec = specialize_signs(cleared, sg, tau);
        BranchSolution br;
        br.gPower = g;
        br.quadratic = quad;
        for (auto t : spec.terms) {
          long lp = t.lPower.constant;
          t.lPower = ExponentExpr(0);
          if (lp == 0)
            br.c0.push_back(t);
          else if (lp == g)
            br.c1.push_back(t);
          else
            br.c2.push_back(t);
        }
        if (hasSigma && !symbolicSigma) br.signChoices["sigma"] = sg;
        if (hasV) br.signChoices["tau"] = tau;
        if (quad) br.signChoices["root"] = root;
        if (!quad) {
          LinearParts p = linearParts(br.c1, br.c0, g);
          br.expression = renderLinear(renderTermList(p.num), renderTermList(p.den), g);
          br.validity = "valid where " + renderTermList(p.den) + " != 0";
          if (g % 2 == 0) br.validity += "; the width is reported as a magnitude";
        } else {
          br.expression = renderQuadratic(renderTermList(br.c2), renderTermList(br.c1),
                                          renderTermList(br.c0), g, root);
          br.validity =
              "valid where the leading coefficient does not vanish and the radicand is "
              "nonnegative; the width is reported as a magnitude";
        }
        br.specialized = specialize_signs(rel, sg, tau);
        std::string fp = fingerprint(br);
        auto it = seen.find(fp);
        if (it == seen.end()) {
          seen.emplace(std::move(fp), out.size());
          outAdmissible.push_back(admissibleCount(br));
          out.push_back(std::move(br));
        } else {
          int cnt = admissibleCount(br);
          if (cnt > outAdmissible[it->second]) {
            outAdmissible[it->second] = cnt;
            out[it->second] = std::move(br);
          }
        }
      }
    }
  }
  return out;
}

std::vector<std::string> presentBranches(const std::vector<BranchSolution>& branches) {
  std::vector<std::string> lines;
  std::vector<bool> used(branches.size(), false);
  for (size_t i = 0; i < branches.size(); ++i) {
    if (used[i]) continue;
    const BranchSolution& a = branches[i];
    auto ti = a.signChoices.find("tau");
    long partner = -1;
    if (ti != a.signChoices.end() && a.kind == BranchSolution::Kind::Explicit &&
        !a.quadratic) {
      for (size_t j = i + 1; j < branches.size(); ++j) {
        if (used[j]) continue;
        const BranchSolution& b = branches[j];
        auto tj = b.signChoices.find("tau");
        if (tj == b.signChoices.end() || tj->second == ti->second) continue;
        std::map<std::string, int> sa = a.signChoices, sb = b.signChoices;
        sa.erase("tau");
        sb.erase("tau");
        if (sa == sb && b.kind == BranchSolution::Kind::Explicit && !b.quadratic &&
            b.gPower == a.gPower) {
          partner = static_cast<long>(j);
          break;
        }
      }
    }
    if (partner < 0) {
      lines.push_back(a.expression);
      used[i] = true;
      continue;
    }
    const BranchSolution& b = branches[static_cast<size_t>(partner)];
    LinearParts pa = linearParts(a.c1, a.c0, a.gPower);
    LinearParts pb = linearParts(b.c1, b.c0, b.gPower);
    bool numV = hasVelocity(pa.num), denV = hasVelocity(pa.den);
    bool aligned = pa.num.size() == pb.num.size() && pa.den.size() == pb.den.size();
    if (aligned) {
      for (size_t k = 0; k < pa.num.size() && aligned; ++k)
        if (pa.num[k].signatureKey() != pb.num[k].signatureKey()) aligned = false;
      for (size_t k = 0; k < pa.den.size() && aligned; ++k)
        if (pa.den[k].signatureKey() != pb.den[k].signatureKey()) aligned = false;
    }
    if (!aligned || (numV && denV)) {
      lines.push_back(a.expression);
      used[i] = true;
      continue;
    }
    std::string numText =
        numV ? renderTermListPM(pa.num, pb.num) : renderTermList(pa.num);
    std::string denText =
        denV ? renderTermListPM(pa.den, pb.den) : renderTermList(pa.den);
    lines.push_back(renderLinear(numText, denText, a.gPower));
    used[i] = used[static_cast<size_t>(partner)] = true;
  }
  return lines;
}

}  // namespace osa
