#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "catalog_detail.hpp"
#include "osa/errors.hpp"
#include "osa/parse.hpp"
#include "osa/solve.hpp"

namespace osa::catalog_detail {

namespace {

using C = std::complex<double>;

double uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

bool isExponentName(const std::string& n) {
  return n == "n" || n == "m" || n == "k" || n == "l" || n == "p" || n == "gamma";
}

// Fill one evaluation point: amplitude, velocity, every declared parameter
// (exponent-like names kept in a range where powers stay tame), and generic
// positive values for f, g, h and their first three derivatives at A.
RelationBindings drawPoint(const EntryDef& def, std::mt19937& rng) {
  RelationBindings b;
  b.A = uniform(rng, 0.35, 2.2);
  b.V = uniform(rng, 0.25, 3.0);
  for (const auto& name : def.skeleton.params)
    b.params[name] = isExponentName(name) ? uniform(rng, 1.7, 3.3) : uniform(rng, 0.45, 2.1);
  for (const auto& name : def.ansatzParams)
    if (!b.params.count(name)) b.params[name] = uniform(rng, 0.45, 2.1);
  for (char f : {'f', 'g', 'h'})
    for (int order = 0; order <= 3; ++order) b.funcEvals[{f, order}] = uniform(rng, 0.5, 2.0);
  if (def.draw) def.draw(rng, b);
  return b;
}

bool sameSet(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), 1e-12});
    if (std::fabs(a[i] - b[i]) > 1e-9 * scale) return false;
  }
  return true;
}

// Width growth exponents between A = 2^20 and A = 2^22 at an otherwise fixed
// point; deduplicated so branch multiplicity does not obscure agreement.
std::optional<std::vector<double>> probeSlopes(
    const std::function<std::vector<double>(const RelationBindings&)>& widths,
    RelationBindings b) {
  b.A = 1048576.0;  // 2^20
  auto s1 = canonicalSet(widths(b));
  b.A = 4194304.0;  // 2^22
  auto s2 = canonicalSet(widths(b));
  if (s1.empty() || s2.empty()) return std::nullopt;
  const double log4 = std::log(4.0);
  std::vector<double> slopes;
  if (s1.size() == s2.size()) {
    for (size_t j = 0; j < s1.size(); ++j) slopes.push_back(std::log(s2[j] / s1[j]) / log4);
  } else {
    // Branch admissibility changed between the two amplitudes; compare the
    // extreme branches only.
    slopes.push_back(std::log(s2.front() / s1.front()) / log4);
    slopes.push_back(std::log(s2.back() / s1.back()) / log4);
  }
  std::sort(slopes.begin(), slopes.end());
  std::vector<double> out;
  for (double v : slopes) {
    if (!out.empty() && std::fabs(v - out.back()) <= 5e-4) continue;
    out.push_back(v);
  }
  return out;
}

}  // namespace

double absRootMag(std::complex<double> x, long g) {
  double m = std::abs(x);
  if (!std::isfinite(m) || m < 1e-300) return std::numeric_limits<double>::quiet_NaN();
  return std::pow(m, 1.0 / static_cast<double>(g));
}

std::vector<double> litLinear(std::complex<double> num, std::complex<double> den, long g) {
  if (std::abs(den) < kPivotGuard) return {};
  double v = absRootMag(num / den, g);
  if (std::isnan(v)) return {};
  return {v};
}

std::vector<double> litQuadratic(std::complex<double> c2, std::complex<double> c1,
                                 std::complex<double> c0, long g) {
  if (std::abs(c2) < kPivotGuard) return {};
  C disc = c1 * c1 - 4.0 * c2 * c0;
  if (std::abs(disc) < kPivotGuard) return {};
  C s = std::sqrt(disc);
  std::vector<double> out;
  for (double sign : {1.0, -1.0}) {
    double v = absRootMag((-c1 + sign * s) / (2.0 * c2), g);
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

std::vector<double> engineWidths(const std::vector<BranchSolution>& branches,
                                 const RelationBindings& b) {
  std::vector<double> out;
  for (const auto& br : branches) {
    if (br.kind != BranchSolution::Kind::Explicit) continue;
    double v = branchAbsL(br, b, /*requirePositiveRealRoot=*/false);
    if (std::isfinite(v) && v > 0.0) out.push_back(v);
  }
  return out;
}

std::vector<double> canonicalSet(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (double v : vals) {
    if (!out.empty()) {
      double scale = std::max({std::fabs(v), std::fabs(out.back()), 1e-12});
      if (std::fabs(v - out.back()) <= 1e-9 * scale) continue;
    }
    out.push_back(v);
  }
  return out;
}

MatchFlag compute_match(const EntryDef& def, const CatalogEntry& entry) {
  if (def.constraintMatch) {
    for (const auto& br : entry.branches)
      if (br.kind == BranchSolution::Kind::Constraint && br.expression == def.constraintExpect)
        return MatchFlag::Exact;
    return MatchFlag::Mismatch;
  }
  if (def.coefficientTriple) return match_coefficient_triple(def);
  if (!def.lit) return MatchFlag::Mismatch;

  std::mt19937 rng(7130159u);
  std::vector<RelationBindings> points;
  points.reserve(24);
  for (int i = 0; i < 24; ++i) points.push_back(drawPoint(def, rng));

  // Phase 1: exact set equality of predicted |L| magnitudes. Points where
  // either side predicts nothing (a guard tripped) are neutral.
  int valid = 0;
  bool allEqual = true;
  for (const auto& b : points) {
    auto ev = canonicalSet(engineWidths(entry.branches, b));
    auto lv = canonicalSet(def.lit(b));
    if (ev.empty() || lv.empty()) continue;
    ++valid;
    if (!sameSet(ev, lv)) {
      allEqual = false;
      break;
    }
  }
  if (allEqual && valid >= 12) return MatchFlag::Exact;

  // Phase 2: large-amplitude scaling probe at the first few points.
  auto engineSide = [&](const RelationBindings& b) { return engineWidths(entry.branches, b); };
  int probes = 0, agree = 0;
  for (size_t i = 0; i < points.size() && probes < 6; ++i) {
    auto es = probeSlopes(engineSide, points[i]);
    auto ls = probeSlopes(def.lit, points[i]);
    if (!es || !ls) continue;
    ++probes;
    bool ok = es->size() == ls->size();
    for (size_t j = 0; ok && j < es->size(); ++j)
      if (std::fabs((*es)[j] - (*ls)[j]) > 2e-3) ok = false;
    if (ok) ++agree;
  }
  if (probes >= 4 && agree == probes) return MatchFlag::ScalingOnly;
  return MatchFlag::Mismatch;
}

MatchFlag match_coefficient_triple(const EntryDef& def) {
  // Concrete (n, l) samples; the quoted polynomial assumes m = p = n + l.
  const std::pair<long, long> samples[] = {{2, 1}, {3, 2}, {2, 3}, {4, 1}};
  std::mt19937 rng(4409871u);
  for (auto [n, l] : samples) {
    long m = n + l;
    Expr ex = parse_equation(def.skeleton.equationSrc, def.skeleton.params);
    ex = substitute_param(ex, "n", n);
    ex = substitute_param(ex, "l", l);
    ex = substitute_param(ex, "p", m);
    ex = substitute_param(ex, "m", m);
    auto rels = scale_substitute(traveling_reduce(ex), ScaleRelation::Mode::Real);
    if (rels.empty()) return MatchFlag::Mismatch;
    ScaleRelation rel = normalize(rels.front());

    Ansatz an;
    an.kind = Ansatz::Kind::PowerLaw;
    an.coeff = Coefficient::param("V0");
    an.exponent = ExponentExpr(m);
    an.text = "V = V0*A^m";
    ScaleRelation r2 = normalize(apply_ansatz(rel, an));

    for (int draw = 0; draw < 3; ++draw) {
      RelationBindings b;
      b.A = 1.0;
      b.sigma = 1;
      b.params["alpha"] = uniform(rng, 0.45, 2.1);
      b.params["beta"] = uniform(rng, 0.45, 2.1);
      b.params["gamma"] = uniform(rng, 0.45, 2.1);
      b.params["V0"] = b.params["alpha"] + uniform(rng, 0.5, 1.5);

      // Sum the relation's terms by width power; expect exactly the groups
      // L^0, L^-2, L^-(l+4).
      std::map<long, C> groups;
      for (const auto& t : r2.terms) {
        if (!t.lPower.isConstant()) return MatchFlag::Mismatch;
        long lp = std::lround(t.lPower.evaluate({}));
        groups[lp] += evaluateTerm(t, b);
      }
      if (groups.size() != 3 || !groups.count(0) || !groups.count(-2) ||
          !groups.count(-(l + 4)))
        return MatchFlag::Mismatch;

      double e0 = groups[0].real();
      double e2 = groups[-2].real();
      double e4 = groups[-(l + 4)].real();

      double nd = static_cast<double>(n), ld = static_cast<double>(l);
      double v0 = b.params["V0"], alpha = b.params["alpha"];
      double beta = b.params["beta"], gamma = b.params["gamma"];
      // Quoted polynomial coefficients; its alpha absorbs the p + 1 prefactor
      // carried by this equation's source term alpha*u^(p+1).
      double t0 = 2.0 * (nd + ld + 1.0) * (v0 - alpha);
      double t2 = -2.0 * (nd + ld + 1.0) * (nd + ld + 2.0) * beta;
      double t4 = -(nd + ld + 1.0) *
                  (2.0 + 2.0 * nd * nd + 3.0 * ld + ld * ld + nd * (5.0 + 3.0 * ld)) * gamma;

      if (std::fabs(e0) < 1e-12) return MatchFlag::Mismatch;
      double lambda = t0 / e0;
      if (std::fabs(t2 - lambda * e2) > 1e-9 * std::max(std::fabs(t2), 1.0))
        return MatchFlag::Mismatch;
      if (std::fabs(t4 - lambda * e4) > 1e-9 * std::max(std::fabs(t4), 1.0))
        return MatchFlag::Mismatch;
    }
  }
  return MatchFlag::Exact;
}

}  // namespace osa::catalog_detail
