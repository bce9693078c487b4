#include "osa/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>

#include "osa/errors.hpp"

namespace osa {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::complex<double> cpowInt(std::complex<double> base, int p) {
  std::complex<double> r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
  return r;
}

int maxDerivOrder(const Expr& eq) {
  int mx = 0;
  for (const auto& mono : eq.monomials)
    for (const auto& f : mono.factors)
      if (f.kind == Factor::Kind::FieldDeriv) mx = std::max(mx, f.order);
  for (const auto& td : eq.timeDerivs) mx = std::max(mx, td.xOrder + td.tOrder);
  return mx;
}

struct SampledField {
  // derivs[k][i]: k-th spatial derivative at grid point i
  std::vector<std::vector<std::complex<double>>> derivs;
  long firstValid = 0, lastValid = 0;  // indices with a full stencil
};

SampledField sampleDerivatives(const SolutionSpec& sol, const Grid& g, int maxOrder) {
  SampledField s;
  std::vector<std::complex<double>> u(g.n);
  for (long i = 0; i < g.n; ++i) u[i] = sol.eval(g.x(i));
  s.derivs.assign(maxOrder + 1, u);
  int hwMax = 0;
  for (int k = 1; k <= maxOrder; ++k) hwMax = std::max(hwMax, stencil_half_width(k));
  s.firstValid = hwMax;
  s.lastValid = g.n - 1 - hwMax;
  for (int k = 1; k <= maxOrder; ++k) {
    int hw = stencil_half_width(k);
    std::vector<double> w = fornberg_weights(k, hw);
    double scale = std::pow(g.h, -k);
    auto& out = s.derivs[k];
    std::fill(out.begin(), out.end(), std::complex<double>(0.0, 0.0));
    for (long i = hw; i < g.n - hw; ++i) {
      std::complex<double> acc = 0.0;
      for (int j = -hw; j <= hw; ++j) acc += w[j + hw] * u[i + j];
      out[i] = acc * scale;
    }
  }
  return s;
}

std::vector<Band> exclusionBands(const SolutionSpec& sol, const Grid& g) {
  double b = 5.0 * g.h;
  std::vector<Band> bands;
  bands.push_back({g.xmin, g.xmin + b});
  bands.push_back({g.xmax - b, g.xmax});
  if (sol.support) {
    for (double e : {sol.support->first, sol.support->second}) {
      bands.push_back({e - b, e});
      bands.push_back({e, e + b});
    }
  }
  for (double e : sol.joints) {
    bands.push_back({e - b, e});
    bands.push_back({e, e + b});
  }
  return bands;
}

bool inBands(double x, const std::vector<Band>& bands) {
  for (const auto& bd : bands)
    if (x >= bd.lo && x <= bd.hi) return true;
  return false;
}

double supResidual(const Expr& eq, const SolutionSpec& sol, const Grid& g,
                   const std::vector<Band>& bands) {
  int maxOrder = maxDerivOrder(eq);
  SampledField s = sampleDerivatives(sol, g, maxOrder);
  std::complex<double> iw(0.0, sol.omega);
  double termSup = 0.0, residSup = 0.0;
  bool any = false;
  Bindings b;
  b.params = sol.params;
  b.params["V"] = sol.velocity;
  for (long i = s.firstValid; i <= s.lastValid; ++i) {
    if (inBands(g.x(i), bands)) continue;
    b.fieldDerivs.clear();
    for (int k = 0; k <= maxOrder; ++k) b.fieldDerivs.push_back(s.derivs[k][i]);
    std::complex<double> sum = 0.0;
    for (const auto& mono : eq.monomials) {
      std::complex<double> v = detail::evaluateMonomial(mono, b);
      sum += v;
      termSup = std::max(termSup, std::abs(v));
    }
    for (const auto& td : eq.timeDerivs) {
      // Traveling phase form: each d/dt acts as (i*omega - V d/dx).
      std::complex<double> op = 0.0;
      for (int t = 0; t <= td.tOrder; ++t) {
        std::complex<double> c =
            binom(td.tOrder, t) * cpowInt(iw, td.tOrder - t) *
            std::pow(-sol.velocity, static_cast<double>(t));
        op += c * s.derivs[td.xOrder + t][i];
      }
      std::complex<double> v = td.differentiand.coeff.evaluate(b.params) * op;
      sum += v;
      termSup = std::max(termSup, std::abs(v));
    }
    residSup = std::max(residSup, std::abs(sum));
    any = true;
  }
  if (!any) throw GridTooCoarse("no interior points remain after band exclusions");
  if (termSup == 0.0) return 0.0;
  return residSup / termSup;
}

double meanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

Grid::Grid(double lo, double hi, long points) : xmin(lo), xmax(hi), n(points) {
  if (!(hi > lo)) throw ValidationFailure("grid needs xmax > xmin");
  if (points < 257) throw ValidationFailure("grid needs at least 257 points");
  h = (hi - lo) / static_cast<double>(points - 1);
}

int stencil_half_width(int m) {
  int hw = (m + 7) / 2;
  return hw < 4 ? 4 : hw;
}

std::vector<double> fornberg_weights(int m, int halfWidth) {
  if (m < 0 || halfWidth < 1 || 2 * halfWidth < m)
    throw ValidationFailure("stencil too small for the requested derivative");
  const int nn = 2 * halfWidth;  // highest node index
  std::vector<double> xs(nn + 1);
  for (int i = 0; i <= nn; ++i) xs[i] = static_cast<double>(i - halfWidth);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(nn + 1, 0.0));
  double c1 = 1.0;
  double c4 = xs[0];
  c[0][0] = 1.0;
  for (int i = 1; i <= nn; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = xs[i];
    for (int j = 0; j < i; ++j) {
      double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[m];
}

ResidualReport residual(const Expr& eq, const SolutionSpec& sol, const Grid& grid,
                        double tolerance) {
  if (sol.support) {
    double margin = 10.0 * grid.h;
    if (!(sol.support->first - grid.xmin >= margin &&
          grid.xmax - sol.support->second >= margin))
      throw ValidationFailure("grid must contain the support with a margin of at least 10h");
  }
  Expr ceq = canonicalize(eq);
  ResidualReport rep;
  rep.solutionId = sol.id;
  rep.grid = grid;
  rep.excludedBands = exclusionBands(sol, grid);
  rep.relativeSupResidual = supResidual(ceq, sol, grid, rep.excludedBands);

  // Convergence order from dyadic refinements of the same domain, measured
  // before the rounding floor. The base ladder is three refinements of n/8;
  // while the coarsest octave is still floor-dominated (less than a 4x drop
  // per halving of h) the ladder is extended with coarser grids, down to 65
  // points, so the slope reflects the truncation-dominated regime.
  auto residualAt = [&](long nn) {
    if (nn == grid.n) return rep.relativeSupResidual;
    Grid gg;
    gg.xmin = grid.xmin;
    gg.xmax = grid.xmax;
    gg.n = nn;
    gg.h = (grid.xmax - grid.xmin) / static_cast<double>(nn - 1);
    return supResidual(ceq, sol, gg, exclusionBands(sol, gg));
  };
  std::vector<long> rungs;  // coarsest first
  std::vector<double> rs;
  for (long nn : {grid.n / 8, grid.n / 4, grid.n / 2, grid.n})
    if (nn >= 129) rungs.push_back(nn);
  for (long nn : rungs) rs.push_back(residualAt(nn));
  while (rungs.size() < 9 && rungs.front() / 2 >= 49 &&
         !(rs.size() >= 2 && rs[0] > 64.0 * rs[1])) {
    rungs.insert(rungs.begin(), rungs.front() / 2);
    rs.insert(rs.begin(), residualAt(rungs.front()));
  }
  if (std::getenv("OSA_DEBUG_LADDER")) {
    for (size_t i = 0; i < rungs.size(); ++i)
      std::fprintf(stderr, "[ladder] n=%ld r=%.6e\n", rungs[i], rs[i]);
  }
  // Pre-floor prefix: the initial run of octaves each dropping by 4x or more.
  size_t prefix = 1;
  while (prefix < rs.size() && rs[prefix - 1] > 4.0 * rs[prefix]) ++prefix;
  size_t fitEnd = prefix;
  if (prefix < 2) fitEnd = rs.size();  // no convergent regime: fit everything
  // Trailing prefix points may already graze the floor (their octave dropped
  // by less than 64x); trim them while enough clean points remain.
  while (fitEnd >= 3 && prefix >= 2 && rs[fitEnd - 2] <= 64.0 * rs[fitEnd - 1])
    --fitEnd;
  std::vector<double> lh, lr;
  for (size_t i = 0; i < fitEnd; ++i) {
    double hh = (grid.xmax - grid.xmin) / static_cast<double>(rungs[i] - 1);
    lh.push_back(std::log(hh));
    lr.push_back(std::log(std::max(rs[i], 1e-17)));
  }
  if (lh.size() >= 2) {
    double mh = meanOf(lh), mr = meanOf(lr);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < lh.size(); ++i) {
      sxx += (lh[i] - mh) * (lh[i] - mh);
      sxy += (lh[i] - mh) * (lr[i] - mr);
    }
    rep.convergenceSlope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  if (rep.relativeSupResidual > tolerance &&
      (rep.convergenceSlope > 3.0 || rs.size() < 2)) {
    throw GridTooCoarseWithReport(
        "residual " + std::to_string(rep.relativeSupResidual) +
            " above tolerance while still converging (order " +
            std::to_string(rep.convergenceSlope) + "); refine the grid",
        rep);
  }
  return rep;
}

namespace {

// Level crossing inside the bracket [x_j, x_{j+1}], refined with a parabola
// through the bracket and one flanking node; falls back to linear
// interpolation when the parabola is degenerate or its root leaves the
// bracket.
double bracketCrossing(const std::vector<double>& u, const Grid& grid, long j,
                       double level) {
  double b = u[j] - level, c = u[j + 1] - level;
  double tLin = b / (b - c);  // linear solution in [0, 1]
  long k = j >= 1 ? j - 1 : j + 2;
  if (k >= 0 && k < grid.n) {
    double a = u[k] - level;
    // Parabola in s = (x - x_j)/h through s in {-1, 0, 1} (or {0, 1, 2}).
    double q2, q1, q0 = b;
    if (k == j - 1) {
      q2 = 0.5 * (c - 2.0 * b + a);
      q1 = 0.5 * (c - a);
    } else {
      q2 = 0.5 * (a - 2.0 * c + b);
      q1 = c - b - q2;
    }
    if (std::abs(q2) > 1e-14 * (std::abs(q1) + std::abs(q0))) {
      double disc = q1 * q1 - 4.0 * q2 * q0;
      if (disc >= 0.0) {
        double sq = std::sqrt(disc);
        double base = q1 >= 0.0 ? q1 + sq : q1 - sq;
        for (double s : {-2.0 * q0 / base, -base / (2.0 * q2)}) {
          if (s >= -1e-9 && s <= 1.0 + 1e-9)
            return grid.x(j) + s * grid.h;
        }
      }
    }
  }
  return grid.x(j) + tLin * grid.h;
}

}  // namespace

Features measure_features(const std::vector<double>& u, const Grid& grid,
                          FeatureKind kind) {
  if (static_cast<long>(u.size()) != grid.n)
    throw ValidationFailure("sample count does not match the grid");
  Features out;
  if (kind == FeatureKind::Kink) {
    double uL = u.front(), uR = u.back();
    double jump = uR - uL;
    out.amplitude = std::abs(jump) / 2.0;
    if (out.amplitude < 1e-12) throw FlatProfile();
    auto crossing = [&](double level) {
      for (long i = 0; i + 1 < grid.n; ++i) {
        if ((u[i] - level) * (u[i + 1] - level) <= 0.0 && u[i] != u[i + 1])
          return bracketCrossing(u, grid, i, level);
      }
      throw ValidationFailure("kink transition level never crossed on the grid");
    };
    out.width =
        std::abs(crossing(uL + 0.75 * jump) - crossing(uL + 0.25 * jump));
    return out;
  }
  double far = 0.5 * (u.front() + u.back());
  long iext = 0;
  double best = -1.0;
  for (long i = 0; i < grid.n; ++i) {
    double dev = kind == FeatureKind::Dark ? far - u[i] : std::abs(u[i] - far);
    if (dev > best) {
      best = dev;
      iext = i;
    }
  }
  out.amplitude = best;
  if (out.amplitude < 1e-12) throw FlatProfile();
  double level = far + 0.5 * (u[iext] - far);  // half max / half depth
  auto sideCrossing = [&](long dir) {
    for (long i = iext; i + dir >= 0 && i + dir < grid.n; i += dir) {
      double a = u[i] - level, b = u[i + dir] - level;
      if (a * b <= 0.0 && u[i] != u[i + dir])
        return bracketCrossing(u, grid, dir > 0 ? i : i - 1, level);
    }
    throw ValidationFailure("half level never crossed on the grid");
  };
  out.width = sideCrossing(+1) - sideCrossing(-1);
  return out;
}

ScalingFit fit_scaling(const std::string& familyId,
                       const std::vector<double>& amplitudes,
                       const std::function<double(double)>& widthOf,
                       double predictedExponent) {
  if (amplitudes.size() < 5)
    throw ValidationFailure("scaling fits need at least 5 amplitudes");
  for (size_t i = 1; i < amplitudes.size(); ++i)
    if (!(amplitudes[i] > amplitudes[i - 1]))
      throw ValidationFailure("amplitudes must be strictly increasing");
  if (!(amplitudes.front() > 0.0) ||
      amplitudes.back() < 10.0 * amplitudes.front())
    throw ValidationFailure("amplitudes must span at least one decade");

  ScalingFit fit;
  fit.familyId = familyId;
  fit.amplitudes = amplitudes;
  fit.predictedExponent = predictedExponent;
  std::vector<double> lx, ly;
  for (double a : amplitudes) {
    double w = widthOf(a);
    fit.widths.push_back(w);
    lx.push_back(std::log(a));
    ly.push_back(std::log(w));
  }
  double mx = meanOf(lx), my = meanOf(ly);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (size_t i = 0; i < lx.size(); ++i) {
    double e = ly[i] - (my + fit.slope * (lx[i] - mx));
    ssr += e * e;
  }
  fit.slopeStdErr =
      std::sqrt(ssr / static_cast<double>(lx.size() - 2) / sxx);
  return fit;
}

ScaleSpectrum scale_spectrum(const std::vector<double>& u, const Grid& grid,
                             int jMin, int jMax, int kStride) {
  if (static_cast<long>(u.size()) != grid.n)
    throw ValidationFailure("sample count does not match the grid");
  if (jMax <= jMin) throw ValidationFailure("scale range must contain j_min < j_max");
  if (kStride < 1) throw ValidationFailure("kStride must be positive");
  double maxAbs = 0.0;
  for (double v : u) maxAbs = std::max(maxAbs, std::abs(v));
  if (maxAbs < 1e-12) throw FlatProfile();
  if (std::pow(2.0, -jMax) < 2.0 * grid.h)
    throw ValidationFailure(
        "finest scale 2^-jMax is below twice the grid spacing; refine the grid "
        "or lower jMax");

  ScaleSpectrum sp;
  sp.jMin = jMin;
  sp.jMax = jMax;
  const double norm = std::pow(kPi, -0.25);
  const double reach = 8.7;  // e^{-s^2/2} below 4e-17 outside
  for (int j = jMin; j <= jMax; ++j) {
    double scale = std::pow(2.0, j);
    long kLo = static_cast<long>(std::floor(scale * grid.xmin)) - 6;
    long kHi = static_cast<long>(std::ceil(scale * grid.xmax)) + 6;
    double Ej = 0.0;
    for (long k = kLo; k <= kHi; k += kStride) {
      // s = scale*x - k stays within +-reach
      double xLo = (static_cast<double>(k) - reach) / scale;
      double xHi = (static_cast<double>(k) + reach) / scale;
      long iLo = std::max(0L, static_cast<long>(std::ceil((xLo - grid.xmin) / grid.h)));
      long iHi = std::min(grid.n - 1,
                          static_cast<long>(std::floor((xHi - grid.xmin) / grid.h)));
      std::complex<double> acc = 0.0;
      for (long i = iLo; i <= iHi; ++i) {
        double s = scale * grid.x(i) - static_cast<double>(k);
        double env = norm * std::exp(-0.5 * s * s);
        // conj(Psi(s)) = e^{+is - s^2/2} / pi^{1/4}
        std::complex<double> ps(env * std::cos(s), env * std::sin(s));
        double w = (i == 0 || i == grid.n - 1) ? 0.5 : 1.0;
        acc += w * u[i] * ps;
      }
      Ej += std::norm(acc * grid.h);
    }
    // L2-normalized analysis: C_{j,k} = 2^{j/2} <u, Psi(2^j s - k)>. The raw
    // inner products plateau at coarse scales (the waveform has nonzero mean),
    // which would pin the dominant scale to the range boundary.
    sp.energies.push_back(Ej * scale);
  }
  size_t arg = 0;
  for (size_t t = 1; t < sp.energies.size(); ++t)
    if (sp.energies[t] > sp.energies[arg]) arg = t;
  sp.dominantJ = jMin + static_cast<int>(arg);
  double total = 0.0;
  for (double e : sp.energies) total += e;
  sp.dominanceRatio = total > 0.0 ? sp.energies[arg] / total : 0.0;
  if (sp.dominantJ == jMin || sp.dominantJ == jMax)
    throw RangeTooNarrow("dominant scale sits on the jRange boundary; widen the range");
  return sp;
}

}  // namespace osa
