#include "osa/balance.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "osa/errors.hpp"

namespace osa {
namespace {

const char* kPropTo = "∝";  // ∝

int priorityIndex(const std::string& v) {
  static const std::vector<std::string> kPriority = {"m", "n", "k", "l", "p"};
  for (size_t i = 0; i < kPriority.size(); ++i)
    if (kPriority[i] == v) return static_cast<int>(i);
  return 1000;  // others after, alphabetically
}

bool priorityLess(const std::string& a, const std::string& b) {
  int pa = priorityIndex(a), pb = priorityIndex(b);
  if (pa != pb) return pa < pb;
  return a < b;
}

// Rational linear form over exponent parameters.
struct RForm {
  Rational k = Rational(0);
  std::map<std::string, Rational> c;

  static RForm constant(Rational r) {
    RForm f;
    f.k = r;
    return f;
  }
  static RForm fromExponent(const ExponentExpr& e) {
    RForm f;
    f.k = Rational(e.constant);
    for (const auto& [n, v] : e.terms) f.c[n] = Rational(v);
    return f;
  }
  bool isZero() const { return k.isZero() && c.empty(); }
  bool isConstant() const { return c.empty(); }
  RForm add(const RForm& o) const {
    RForm f = *this;
    f.k = f.k + o.k;
    for (const auto& [n, v] : o.c) {
      Rational nv = (f.c.count(n) ? f.c[n] : Rational(0)) + v;
      if (nv.isZero())
        f.c.erase(n);
      else
        f.c[n] = nv;
    }
    return f;
  }
  RForm scale(Rational s) const {
    RForm f;
    if (s.isZero()) return f;
    f.k = k * s;
    for (const auto& [n, v] : c) f.c[n] = v * s;
    return f;
  }
  RForm sub(const RForm& o) const { return add(o.scale(Rational(-1))); }
  Rational coeff(const std::string& n) const {
    auto it = c.find(n);
    return it == c.end() ? Rational(0) : it->second;
  }
};

long lcm64(long a, long b) { return a / std::gcd(a, b) * b; }

// Scale to integer coefficients with content 1; leading (priority-first) sign positive.
RForm integerNormalized(const RForm& f0) {
  RForm f = f0;
  long l = f.k.den();
  for (const auto& [n, v] : f.c) l = lcm64(l, v.den());
  f = f.scale(Rational(l));
  long g = std::abs(f.k.num());
  for (const auto& [n, v] : f.c) g = std::gcd(g, std::abs(v.num()));
  if (g > 1) f = f.scale(Rational(1, g));
  // sign: first var by priority (or constant) positive
  std::string lead;
  for (const auto& [n, v] : f.c)
    if (lead.empty() || priorityLess(n, lead)) lead = n;
  Rational leadC = lead.empty() ? f.k : f.c[lead];
  if (leadC.negative()) f = f.scale(Rational(-1));
  return f;
}

// Render an all-nonnegative integer side, terms by priority, constant last.
std::string renderSide(const std::map<std::string, long>& coeffs, long cst) {
  std::vector<std::string> names;
  for (const auto& [n, v] : coeffs) names.push_back(n);
  std::sort(names.begin(), names.end(), priorityLess);
  std::string s;
  for (const auto& n : names) {
    long v = coeffs.at(n);
    if (!s.empty()) s += "+";
    if (v != 1) s += std::to_string(v);
    s += n;
  }
  if (cst != 0) {
    if (!s.empty()) s += "+";
    s += std::to_string(cst);
  }
  if (s.empty()) s = "0";
  return s;
}

// Two-sided display of an integer form = 0, e.g. "2k=m+n", "k+1=2m".
std::string equationText(const RForm& f0) {
  RForm f = integerNormalized(f0);
  std::map<std::string, long> pos, neg;
  long posC = 0, negC = 0;
  for (const auto& [n, v] : f.c) {
    if (v.negative())
      neg[n] = -v.num();
    else
      pos[n] = v.num();
  }
  if (f.k.negative())
    negC = -f.k.num();
  else
    posC = f.k.num();
  // LHS = the side holding the alphabetically-first variable overall.
  std::string first;
  for (const auto& [n, v] : f.c)
    if (first.empty() || n < first) first = n;
  bool lhsPos = first.empty() || pos.count(first) > 0;
  const auto& L = lhsPos ? pos : neg;
  const auto& R = lhsPos ? neg : pos;
  long Lc = lhsPos ? posC : negC;
  long Rc = lhsPos ? negC : posC;
  return renderSide(L, Lc) + "=" + renderSide(R, Rc);
}

}  // namespace

std::string QForm::str() const {
  if (coeffs.empty()) return constant.str();
  std::string s;
  bool first = true;
  for (const auto& [n, v] : coeffs) {
    if (first) {
      if (v == Rational(-1))
        s += "-";
      else if (v != Rational(1))
        s += v.str() + "*";
      first = false;
    } else {
      if (v.negative()) {
        s += "-";
        Rational a = -v;
        if (!a.isOne()) s += a.str() + "*";
      } else {
        s += "+";
        if (!v.isOne()) s += v.str() + "*";
      }
    }
    s += n;
  }
  if (!constant.isZero()) {
    s += constant.negative() ? "-" : "+";
    Rational a = constant.negative() ? -constant : constant;
    s += a.str();
  }
  return s;
}

ExponentConstraint exponent_balance(const ScaleRelation& relation,
                                    const BalanceObjective& objective,
                                    const std::optional<ExponentExpr>& ansatzExponent) {
  ScaleRelation rel = canonicalizeRelation(relation);
  if (rel.terms.empty()) throw EmptyRelation();
  for (const auto& t : rel.terms) {
    if (!t.funcEvals.empty() || !t.elemEvals.empty())
      throw NotPowerLawStructured(
          "function-symbol values do not follow a single amplitude power law");
    if (t.vPower > 0 && objective.kind == BalanceObjective::Kind::WidthPropVelocity)
      throw NotPowerLawStructured(
          "the width-velocity objective requires the velocity ansatz to be applied first");
  }

  // Distinct (A-power, L-power) signatures; velocity factors carry no A-scale.
  std::vector<std::pair<ExponentExpr, ExponentExpr>> sigs;
  for (const auto& t : rel.terms) {
    std::pair<ExponentExpr, ExponentExpr> s{t.aPower, t.lPower};
    if (std::find(sigs.begin(), sigs.end(), s) == sigs.end()) sigs.push_back(s);
  }

  struct Eq {
    RForm alpha;
    ExponentExpr beta;
  };
  std::vector<Eq> eqs;
  for (size_t i = 1; i < sigs.size(); ++i)
    eqs.push_back({RForm::fromExponent(sigs[i].first - sigs[0].first),
                   sigs[i].second - sigs[0].second});

  std::optional<RForm> target;
  switch (objective.kind) {
    case BalanceObjective::Kind::None:
      break;
    case BalanceObjective::Kind::ConstantWidth:
      target = RForm{};
      break;
    case BalanceObjective::Kind::PowerLaw:
      target = RForm::constant(objective.q0);
      break;
    case BalanceObjective::Kind::MassInvariant:
      target = RForm::constant(Rational(-1));
      break;
    case BalanceObjective::Kind::WidthPropVelocity:
      if (!ansatzExponent)
        throw NotPowerLawStructured(
            "the width-velocity objective requires a velocity ansatz");
      target = RForm::fromExponent(*ansatzExponent);
      break;
  }

  std::optional<RForm> q;
  std::vector<RForm> paramEqs;
  std::vector<Eq> pending;
  auto addParamEq = [&](const RForm& f) {
    if (f.isZero()) return;
    if (f.isConstant())
      throw NotPowerLawStructured("the term exponents admit no common power law");
    paramEqs.push_back(f);
  };
  auto setQ = [&](const RForm& cand) {
    if (!q) {
      q = cand;
      return;
    }
    addParamEq(q->sub(cand));
  };
  for (const auto& e : eqs) {
    if (e.beta.isConstant()) {
      if (e.beta.constant == 0)
        addParamEq(e.alpha);
      else
        setQ(e.alpha.scale(Rational(-1, e.beta.constant)));
    } else {
      pending.push_back(e);
    }
  }
  if (target) setQ(*target);
  for (const auto& e : pending) {
    if (!q || !q->isConstant())
      throw NotPowerLawStructured(
          "a symbolic derivative power couples to an unresolved width exponent");
    addParamEq(e.alpha.add(RForm::fromExponent(e.beta).scale(q->k)));
  }
  if (!q)
    throw NotPowerLawStructured("the relation does not tie the width to the amplitude");

  ExponentConstraint out;
  const RForm& rep = target ? *target : *q;
  out.q.constant = rep.k;
  out.q.coeffs = rep.c;
  {
    std::string qs = out.q.str();
    bool bare = false;
    if (out.q.isConstant() && !out.q.constant.negative() && out.q.constant.isInteger())
      bare = true;
    if (out.q.coeffs.size() == 1 && out.q.constant.isZero() &&
        out.q.coeffs.begin()->second.isOne())
      bare = true;
    out.qText = std::string("L ") + kPropTo + " A^" + (bare ? qs : "(" + qs + ")");
  }

  // Display the generated constraints in generation order.
  for (const auto& f : paramEqs) {
    std::string t = equationText(f);
    if (std::find(out.equalities.begin(), out.equalities.end(), t) == out.equalities.end())
      out.equalities.push_back(t);
  }

  // Gaussian elimination for satisfiability and a possible chain display.
  std::set<std::string> varSet;
  for (const auto& f : paramEqs)
    for (const auto& [n, v] : f.c) varSet.insert(n);
  std::vector<std::string> vars(varSet.begin(), varSet.end());
  std::sort(vars.begin(), vars.end(), priorityLess);

  std::vector<RForm> rows = paramEqs;
  std::vector<std::pair<std::string, size_t>> pivots;  // (var, row index)
  std::vector<bool> usedRow(rows.size(), false);
  for (const auto& v : vars) {
    size_t pick = rows.size();
    for (size_t i = 0; i < rows.size(); ++i) {
      if (usedRow[i]) continue;
      if (!rows[i].coeff(v).isZero()) {
        pick = i;
        break;
      }
    }
    if (pick == rows.size()) continue;
    rows[pick] = rows[pick].scale(Rational(1) / rows[pick].coeff(v));
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == pick) continue;
      Rational cv = rows[i].coeff(v);
      if (!cv.isZero()) rows[i] = rows[i].sub(rows[pick].scale(cv));
    }
    usedRow[pick] = true;
    pivots.push_back({v, pick});
  }
  out.satisfiable = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (usedRow[i]) continue;
    if (!rows[i].isZero()) out.satisfiable = false;  // constant leftover: contradiction
  }

  std::string chain;
  if (out.satisfiable && pivots.size() >= 2) {
    bool ok = true;
    std::vector<RForm> intRows;
    for (const auto& [v, idx] : pivots) {
      RForm r = integerNormalized(rows[idx]);
      if (r.coeff(v) != Rational(1)) ok = false;
      intRows.push_back(r);
    }
    if (ok) {
      const std::string& anchor = pivots.front().first;
      const RForm& rowA = intRows.front();
      struct Seg {
        std::map<std::string, long> coeffs;
        long cst = 0;
        int nvars() const { return static_cast<int>(coeffs.size()); }
        std::string lead() const {
          std::string b;
          for (const auto& [n, v] : coeffs)
            if (b.empty() || priorityLess(n, b)) b = n;
          return b;
        }
      };
      auto toSeg = [&](const RForm& mEquals) -> std::optional<Seg> {
        Seg s;
        for (const auto& [n, v] : mEquals.c) {
          if (!v.isInteger()) return std::nullopt;
          s.coeffs[n] = v.num();
        }
        if (!mEquals.k.isInteger()) return std::nullopt;
        s.cst = mEquals.k.num();
        return s;
      };
      std::vector<Seg> segs;
      // anchor row: anchor + R = 0 -> anchor = -R
      RForm restA = rowA;
      restA.c.erase(anchor);
      auto s0 = toSeg(restA.scale(Rational(-1)));
      if (!s0) ok = false;
      if (ok) segs.push_back(*s0);
      for (size_t i = 1; i < intRows.size() && ok; ++i) {
        // anchor = pivot_i + (R_i - R_anchor): from rowA - row_i
        RForm d = rowA.sub(intRows[i]);
        if (d.coeff(anchor) != Rational(1)) {
          ok = false;
          break;
        }
        d.c.erase(anchor);
        auto si = toSeg(d.scale(Rational(-1)));
        if (!si) {
          ok = false;
          break;
        }
        segs.push_back(*si);
      }
      if (ok) {
        // Negative coefficients make a poor chain segment; require nonnegative sides.
        for (const auto& s : segs) {
          for (const auto& [n, v] : s.coeffs)
            if (v < 0) ok = false;
          if (s.cst < 0) ok = false;
        }
      }
      if (ok && !segs.empty()) {
        std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) {
          if (a.nvars() != b.nvars()) return a.nvars() < b.nvars();
          std::string la = a.lead(), lb = b.lead();
          if (la != lb) return priorityLess(la, lb);
          return a.cst < b.cst;
        });
        std::vector<std::string> parts;
        for (const auto& s : segs) {
          std::string t = renderSide(s.coeffs, s.cst);
          if (std::find(parts.begin(), parts.end(), t) == parts.end()) parts.push_back(t);
        }
        chain = anchor;
        for (const auto& p : parts) chain += "=" + p;
      }
    }
  }

  if (!chain.empty()) {
    out.solutionDescription = chain;
  } else {
    std::string s;
    for (const auto& e : out.equalities) {
      if (!s.empty()) s += ", ";
      s += e;
    }
    out.solutionDescription = s;
  }
  return out;
}

}  // namespace osa
