#include "osa/catalog.hpp"

#include <cmath>
#include <complex>
#include <utility>

#include "catalog_detail.hpp"
#include "osa/errors.hpp"
#include "osa/parse.hpp"

namespace osa {

namespace cd = catalog_detail;

namespace {

using RB = RelationBindings;
using C = std::complex<double>;

double P(const RB& b, const std::string& name) {
  auto it = b.params.find(name);
  if (it == b.params.end()) throw UnboundSymbol(name);
  return it->second;
}

double FE(const RB& b, char f, int order) {
  auto it = b.funcEvals.find({f, order});
  if (it == b.funcEvals.end()) throw UnboundSymbol(std::string(1, f) + "^(" + std::to_string(order) + ")");
  return it->second;
}

Ansatz powerAnsatz(const std::string& coeffName, const ExponentExpr& exponent,
                   const std::string& text) {
  Ansatz a;
  a.kind = Ansatz::Kind::PowerLaw;
  a.coeff = Coefficient::param(coeffName);
  a.exponent = exponent;
  a.text = text;
  return a;
}

double uniform(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

// Random +-1, used to place pivot-sensitive parameters on either side.
double coin(std::mt19937& rng) { return (rng() & 1u) ? 1.0 : -1.0; }

std::vector<cd::EntryDef> buildDefs() {
  std::vector<cd::EntryDef> defs;
  auto add = [&](cd::EntryDef d) { defs.push_back(std::move(d)); };

  // --- third-order conservative families -----------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "kdv6";
    d.skeleton.equationSrc = "u_t + 6*u*u_x + u_xxx = 0";
    d.skeleton.literatureRelation = "L = |V ± 6A|^(-1/2); if V ~ A, L ~ A^(-1/2)";
    d.skeleton.sourceRef =
        "quoted beside the solution \"A sech^2((x-Vt)/L); L = (2/A)^(1/2), V = 2A\"";
    d.lit = [](const RB& b) {
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(1.0, C(b.V + s * 6.0 * b.A), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "mkdv";
    d.skeleton.equationSrc = "u_t + u^2*u_x + u_xxx = 0";
    d.skeleton.literatureRelation = "L = |V ± 6A^2|^(-1/2); if V ~ A^2, L ~ A^(-1)";
    d.skeleton.sourceRef =
        "quoted beside the solution \"A sech((x-Vt)/L); L = 1/A, A = V^(1/2)\"";
    d.skeleton.notes =
        "The quoted radicand carries coefficient 6 where this equation's convection "
        "term u^2 u_x yields 1 (a factor-6 normalization of the nonlinearity); the "
        "scaling claim L ~ 1/A at V ~ A^2 agrees. The quoted solution constants "
        "L = 1/A, A = V^(1/2) likewise belong to the 6-normalized variant; the "
        "residual-validated member of this equation is u = A sech(x/L) with "
        "L = 6^(1/2)/A, V = A^2/6.";
    d.lit = [](const RB& b) {
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(1.0, C(b.V + s * 6.0 * b.A * b.A), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "k22";
    d.skeleton.equationSrc = "u_t + (u^2)_x + (u^2)_xxx = 0";
    d.skeleton.literatureRelation = "L = (8A/|V ± 2A|)^(1/2)";
    d.skeleton.sourceRef =
        "quoted beside the compacton \"A cos^2((x-Vt)/L) on |(x-Vt)/4| ≤ π/2; L = 4\"";
    d.lit = [](const RB& b) {
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(C(8.0 * b.A), C(b.V + s * 2.0 * b.A), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "knn";
    d.skeleton.equationSrc = "u_t + (u^n)_x + (u^n)_xxx = 0";
    d.skeleton.params = {"n"};
    d.skeleton.ansatz =
        powerAnsatz("alpha", ExponentExpr::param("n") + ExponentExpr(-1), "V = alpha*A^(n-1)");
    d.ansatzParams = {"alpha"};
    d.skeleton.literatureRelation = "L = (n(n^2+1)/(α ± n))^(1/2) if V = αA^(n-1)";
    d.skeleton.sourceRef =
        "quoted beside the compacton family \"[A cos^2((x-Vt)/L)]^(1/(n-1)) on "
        "|x-Vt| ≤ 2nπ/(n-1); L = 4n/(n-1), A = 2Vn/(n+1)\"";
    d.skeleton.notes =
        "Quoted width coefficient n(n^2+1) where the systematic substitution yields "
        "n^3 (the k22 row's own factor 8 = 2^3 is the n = 2 instance of n^3). The "
        "quoted form also keeps both signs α ± n where the derived relation has the "
        "single group α - n. Under the row's ansatz both widths are "
        "amplitude-independent, so the verdict is scaling agreement only.";
    d.lit = [](const RB& b) {
      double n = P(b, "n"), alpha = P(b, "alpha");
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(C(n * (n * n + 1.0)), C(alpha + s * n), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["alpha"] = P(b, "n") + coin(rng) * uniform(rng, 0.6, 1.8);
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "knm";
    d.skeleton.equationSrc = "u_t + (u^n)_x + (u^m)_xxx = 0";
    d.skeleton.params = {"n", "m"};
    d.skeleton.literatureRelation = "L = (n(n^2+1)A^(n-1)/(V ± mA^(m-1)))^(1/2)";
    d.skeleton.sourceRef =
        "quoted for the two-exponent family whose solution column reads \"unknown in general\"";
    d.skeleton.notes =
        "The quoted form puts the convection exponent pair (n, A^(n-1)) in the "
        "numerator and the dispersion pair (m, A^(m-1)) in the denominator - "
        "transposed relative to the derived relation, where the dispersion term "
        "(u^m)_xxx supplies the numerator m^3 A^(m-1) and convection the "
        "denominator. The large-amplitude width exponents consequently differ: "
        "(m-n)/2 derived against (n-m)/2 quoted.";
    d.lit = [](const RB& b) {
      double n = P(b, "n"), m = P(b, "m");
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(C(n * (n * n + 1.0) * std::pow(b.A, n - 1.0)),
                               C(b.V + s * m * std::pow(b.A, m - 1.0)), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["n"] = uniform(rng, 1.7, 2.2);
      b.params["m"] = uniform(rng, 2.8, 3.3);
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "k212";
    d.skeleton.equationSrc = "u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0";
    d.skeleton.params = {"eps"};
    d.skeleton.literatureRelation =
        "L = ((±A + ε)/(V ± A))^(1/2); constant width along V = ±A + 2ε";
    d.skeleton.sourceRef =
        "quoted in the curvature-dispersion discussion, with critical amplitude ∓2ε";
    d.skeleton.notes =
        "Quoted branches ((±A + ε)/(V ± A))^(1/2) against the derived "
        "((1 + 8εA)/(2A - V))^(1/2)-type pair: the O(1) coefficients differ (and the "
        "quoted form has four sign branches against two), while both widths are "
        "amplitude-independent at large A, consistent with the quoted constant-width "
        "remark.";
    d.lit = [](const RB& b) {
      double eps = P(b, "eps");
      std::vector<double> out;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          auto v = cd::litLinear(C(s1 * b.A + eps), C(b.V + s2 * b.A), 2);
          out.insert(out.end(), v.begin(), v.end());
        }
      }
      return out;
    };
    add(std::move(d));
  }

  // --- dissipative families -------------------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "burgers";
    d.skeleton.equationSrc = "u_t + u*u_x - u_xx = 0";
    d.skeleton.literatureRelation = "L = (A ± V)^(-1); if V ~ A, L ~ 1/A";
    d.skeleton.sourceRef =
        "quoted beside the traveling form "
        "\"(C - V^2)^(1/2) tan((C - V^2)^(1/2)(x - Vt)/2 + D) + V\"";
    d.skeleton.notes =
        "The quoted tan profile continued across C - V^2 < 0 is the validated kink "
        "u = V - 2κ tanh(κ(x - Vt)) with deviation amplitude 2κ; see the solution "
        "record.";
    d.lit = [](const RB& b) {
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(1.0, C(b.A + s * b.V), 1);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "qlparabolic";
    d.skeleton.equationSrc = "u_t + a*(u^m)_x - mu*(u^k)_xx + c*u^gamma = 0";
    d.skeleton.params = {"a", "mu", "c", "m", "k", "gamma"};
    d.skeleton.literatureRelation = "cA^γ L^2 + (V ± amA^(m-1))L ± μk^2 A^(k-1) = 0";
    d.skeleton.sourceRef = "quoted width polynomial of the quasilinear parabolic family";
    d.skeleton.notes =
        "The quoted quadratic carries the source group cA^γ one power of A above the "
        "derived relation (cA^(γ-1) after dividing the common amplitude factor), and "
        "allows an independent sign on the dissipative group. The polynomials are "
        "not proportional, and the large-amplitude width exponent sets differ: "
        "{m-γ, k-m} derived against {m-1-γ, k-m} quoted.";
    d.lit = [](const RB& b) {
      double a = P(b, "a"), mu = P(b, "mu"), c = P(b, "c");
      double m = P(b, "m"), k = P(b, "k"), g = P(b, "gamma");
      std::vector<double> out;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          auto v = cd::litQuadratic(C(c * std::pow(b.A, g)),
                                    C(b.V + s1 * a * m * std::pow(b.A, m - 1.0)),
                                    C(s2 * mu * k * k * std::pow(b.A, k - 1.0)), 1);
          out.insert(out.end(), v.begin(), v.end());
        }
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["gamma"] = uniform(rng, 1.6, 2.0);
      b.params["m"] = uniform(rng, 2.2, 2.6);
      b.params["k"] = uniform(rng, 2.9, 3.3);
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "nlburgers";
    d.skeleton.equationSrc = "u_t + a*(u^m)_x - mu*(u^k)_xx = 0";
    d.skeleton.params = {"a", "mu", "m", "k"};
    d.skeleton.ansatz =
        powerAnsatz("alpha", ExponentExpr::param("m") + ExponentExpr(-1), "V = alpha*A^(m-1)");
    d.ansatzParams = {"alpha"};
    d.skeleton.literatureRelation = "L = μk^2/(am - α) · A^(k-m), if V = αA^(m-1)";
    d.skeleton.sourceRef =
        "quoted beside the hypergeometric profile \"-A z^α 1F1(α, α+1, z) = x + x0\" "
        "with α = (k-1)/(m-1)";
    d.skeleton.notes =
        "Exact against the quoted power-law width under the row's ansatz "
        "V = αA^(m-1); the accompanying profile fixes α = (k-1)/(m-1) to match the "
        "hypergeometric exponent.";
    d.lit = [](const RB& b) {
      double a = P(b, "a"), mu = P(b, "mu"), m = P(b, "m"), k = P(b, "k");
      double alpha = P(b, "alpha");
      return cd::litLinear(C(mu * k * k * std::pow(b.A, k - m)), C(a * m - alpha), 1);
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["alpha"] = P(b, "a") * P(b, "m") + coin(rng) * uniform(rng, 0.6, 1.6);
    };
    add(std::move(d));
  }

  // --- non-polynomial / oscillatory -----------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "sine_gordon";
    d.skeleton.equationSrc = "u_xt - sin(u) = 0";
    d.skeleton.literatureRelation = "±VA/L^2 = sin A; if V = L^2, A = sin A";
    d.skeleton.sourceRef =
        "quoted beside the kink \"A tan^(-1) γ e^((x-Vt)/L)\"";
    d.lit = [](const RB& b) {
      return cd::litLinear(C(b.V * b.A), C(std::sin(b.A)), 2);
    };
    add(std::move(d));
  }

  // --- envelope families ------------------------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "nls3";
    d.skeleton.equationSrc = "i*psi_t + psi_xx + 2*|psi|^2*psi = 0";
    d.skeleton.mode = ScaleRelation::Mode::Envelope;
    d.skeleton.literatureRelation =
        "L = (±V ± (|V^2 - 4A^2|)^(1/2))/(2A^2); if A ~ V, L = 1/A";
    d.skeleton.sourceRef =
        "quoted beside the envelope soliton \"η0 e^(i(ωt+kx)) sech(η0(x-Vt)); L = 1/η0\"";
    d.skeleton.notes =
        "The envelope substitution of 2|ψ|^2 ψ gives the quadratic "
        "2A^2 L^2 + σVL - 1 = 0; the quoted branches carry radicand V^2 - 4A^2 and "
        "denominator 2A^2 where the derived roots have V^2 + 8A^2 and 4A^2. Both "
        "widths scale as 1/A at large amplitude (and at V ~ A), matching the quoted "
        "remark.";
    d.lit = [](const RB& b) {
      double s = std::sqrt(std::fabs(b.V * b.V - 4.0 * b.A * b.A));
      double den = 2.0 * b.A * b.A;
      std::vector<double> out;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          double val = std::fabs(s1 * b.V + s2 * s) / den;
          if (val > 1e-300) out.push_back(val);
        }
      }
      return out;
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "nlsn";
    d.skeleton.equationSrc = "i*psi_t + psi_xx + |psi|^(n-1)*psi = 0";
    d.skeleton.params = {"n"};
    d.skeleton.mode = ScaleRelation::Mode::Envelope;
    d.skeleton.literatureRelation = "L = (±V ± (|V^2 - 4A^n|)^(1/2))/(2A^n)";
    d.skeleton.sourceRef =
        "quoted for the general-power envelope family whose solution column reads "
        "\"unknown in general\"";
    d.skeleton.notes =
        "The quoted denominator 2A^n and radicand V^2 - 4A^n sit one power of A "
        "above the derived groups A^(n-1) (the nonlinearity |ψ|^(n-1)ψ enters as "
        "A^(n-1) once the common factor of ψ is divided out). The large-amplitude "
        "width exponent differs: -(n-1)/2 derived against -n/2 quoted.";
    d.lit = [](const RB& b) {
      double n = P(b, "n");
      double an = std::pow(b.A, n);
      double s = std::sqrt(std::fabs(b.V * b.V - 4.0 * an));
      std::vector<double> out;
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          double val = std::fabs(s1 * b.V + s2 * s) / (2.0 * an);
          if (val > 1e-300) out.push_back(val);
        }
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) { b.params["n"] = uniform(rng, 2.3, 3.1); };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "gp1d";
    d.skeleton.equationSrc = "i*psi_t + 1/2*psi_xx - a*|psi|^2*psi - v0*psi + psi = 0";
    d.skeleton.params = {"a", "v0"};
    d.skeleton.mode = ScaleRelation::Mode::Envelope;
    d.skeleton.literatureRelation = "L = (aA^2 ± V - 1)^(-1/2); if V ~ ±1, L ~ 1/(A a^(1/2))";
    d.skeleton.sourceRef =
        "quoted beside the dark soliton \"ip + (v_c^2 - p^2)^(1/2) "
        "tanh(a(v_c^2 - p^2)^(1/2)(x - q(t)))\" and the in-text width "
        "\"L = 1/(v_c^2 - p^2)^(1/2)\", v_c = (1 - aV)^(1/2)";
    d.skeleton.notes =
        "The derived real-part relation 2(aA^2 + v0 - 1)L^2 - 2σVL + 1 = 0 keeps the "
        "potential offset v0 and a velocity cross term; the quoted "
        "(aA^2 ± V - 1)^(-1/2) matches it only up to O(1) groups. Both scale as "
        "L ~ 1/(A a^(1/2)) at large amplitude. The quoted dark-soliton width "
        "1/(v_c^2 - p^2)^(1/2) is recorded with the solution entry.";
    d.lit = [](const RB& b) {
      double a = P(b, "a");
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litLinear(1.0, C(a * b.A * b.A + s * b.V - 1.0), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    add(std::move(d));
  }

  // --- linear / constraint ----------------------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "linear_wave";
    d.skeleton.equationSrc = "u_xx - 1/c^2*u_tt = 0";
    d.skeleton.params = {"c"};
    d.skeleton.literatureRelation = "V = c; A, L arbitrary";
    d.skeleton.sourceRef =
        "quoted beside the superposition \"Σ C_k e^(i(kx ± ωt)); k^2 = ω^2/c^2\"";
    d.skeleton.notes =
        "The derived constraint is V^2 = c^2 - both orientations of the phase "
        "velocity - with amplitude and width free, refining the quoted V = c.";
    d.constraintMatch = true;
    d.constraintExpect = "V^2 = c^2";
    add(std::move(d));
  }

  // --- mixed convection-dissipation-dispersion --------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "diss_disp";
    d.skeleton.equationSrc = "u_t + a*(u^m)_x + mu*(u^k)_xx + (u^n)_xxx = 0";
    d.skeleton.params = {"a", "mu", "m", "k", "n"};
    Ansatz an;
    an.coeff = Coefficient::param("V0");
    an.coeff.mulParam("m", ExponentExpr(1));
    an.exponent = ExponentExpr::param("m") + ExponentExpr(-1);
    an.text = "V = m*V0*A^(m-1)";
    d.skeleton.ansatz = an;
    d.ansatzParams = {"V0"};
    d.skeleton.literatureRelation =
        "L = A^(k-m) (μk^2 ± (μ^2k^4 - 4mn^3(a - V0))^(1/2))/(2m(a - V0)) if V = mV0 A^(m-1)";
    d.skeleton.sourceRef =
        "quoted in-text for the convection-dissipation-dispersion balance; a tabulated "
        "variant of the same row transposes the exponent pair to A^(m-k) with "
        "V = mV0 A^(k-1)";
    d.skeleton.notes =
        "Quoted from the closed form whose exponent pair (width factor A^(k-m) under "
        "V = mV0 A^(m-1)) is self-consistent; it is reproduced exactly when the "
        "radicand is amplitude-free, i.e. on the width-balance surface 2k = m + n, "
        "which the comparison draws honor. The tabulated variant transposing the "
        "pair does not satisfy its own relation.";
    d.lit = [](const RB& b) {
      double a = P(b, "a"), mu = P(b, "mu"), m = P(b, "m"), k = P(b, "k"), n = P(b, "n");
      double v0 = P(b, "V0");
      double scale = std::pow(b.A, k - m);
      C disc = C(mu * mu * std::pow(k, 4) - 4.0 * m * n * n * n * (a - v0));
      if (std::abs(disc) < cd::kPivotGuard) return std::vector<double>{};
      if (std::fabs(2.0 * m * (a - v0)) < cd::kPivotGuard) return std::vector<double>{};
      C root = std::sqrt(disc);
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        double val = std::abs((C(mu * k * k) + s * root) / C(2.0 * m * (a - v0))) * scale;
        if (val > 1e-300) out.push_back(val);
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      // The quoted radicand is amplitude-free only on the width-balance
      // surface 2k = m + n; amplitudes >= 1 keep the engine-side discriminant
      // guard no tighter than the quoted form's.
      b.A = uniform(rng, 1.0, 2.2);
      b.params["k"] = 0.5 * (P(b, "m") + P(b, "n"));
      b.params["V0"] = P(b, "a") + coin(rng) * uniform(rng, 0.6, 1.6);
    };
    add(std::move(d));
  }

  // --- fifth-order generalized family (stationary Euler-Lagrange form) --------
  {
    cd::EntryDef d;
    d.skeleton.id = "gkdv5";
    d.skeleton.equationSrc =
        "V*u - alpha*u^(p+1) + beta*m*u^(m-1)*u_x^2 - 2*beta*(u^m*u_x)_x"
        " - gamma*n/2*u^(n-1)*u_x^l*u_xx^2 + gamma*l/2*(u^n*u_x^(l-1)*u_xx^2)_x"
        " - gamma*(u^n*u_x^l*u_xx)_xx = 0";
    d.skeleton.params = {"alpha", "beta", "gamma", "m", "p", "n", "l"};
    d.skeleton.ansatz = powerAnsatz("V0", ExponentExpr::param("m"), "V = V0*A^m");
    d.ansatzParams = {"V0"};
    d.skeleton.literatureRelation =
        "2L^(l+4)((n+l+1)V0 - α) - 2L^(l+2)(l+n+1)(l+n+2)β"
        " - (l+n+1)(2 + 2n^2 + 3l + l^2 + n(5 + 3l))γ = 0; if C = 0, V = V0 A^m and "
        "m = p = n + l";
    d.skeleton.sourceRef =
        "quoted width polynomial of the fifth-order family's Euler-Lagrange reduction";
    d.skeleton.notes =
        "Exact: at m = p = n + l the three width-power coefficient groups (L^(l+4), "
        "L^(l+2), L^0) of the derived relation are proportional to the quoted "
        "polynomial's, with the quoted α absorbing the factor p + 1 from the "
        "Euler-Lagrange source term α/(p+1) u^(p+1). A companion prose line "
        "misprints the constraint as m = p = n + r.";
    d.coefficientTriple = true;
    add(std::move(d));
  }

  // --- flux-function family ---------------------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "fgh";
    d.skeleton.equationSrc = "u_t + f(u)_x + g(u)_xx + h(u)_xxx = 0";
    Ansatz an;
    an.kind = Ansatz::Kind::FPrime;
    an.coeff = Coefficient::param("V0");
    an.text = "V = V0*f'(A)";
    d.skeleton.ansatz = an;
    d.ansatzParams = {"V0"};
    d.skeleton.literatureRelation =
        "L^2 f'(1 - V0) + L(Ag'' + g') + A^2h''' + 3Ah'' + h' = 0 if V = V0 f'(A)";
    d.skeleton.sourceRef =
        "quoted explicit root: \"L = -[g' + Ag'' ∓ ((Ag'' + g')^2 - 4f'(1 - V0)"
        "(A^2h''' + 3Ah'' + h'))^(1/2)] × (2A^2h''' + 6Ah'' + 2h')^(-1)\"";
    d.skeleton.notes =
        "The derived quadratic matches the quoted one; the quoted explicit root is "
        "printed over the constant-term group 2(A^2h''' + 3Ah'' + h') where the root "
        "of the quoted quadratic itself requires the leading group 2f'(1 - V0) (as "
        "printed it solves for 1/L). The verdict is computed against the quoted "
        "quadratic's branches.";
    d.lit = [](const RB& b) {
      double v0 = P(b, "V0");
      double fp = FE(b, 'f', 1);
      double gp = FE(b, 'g', 1), gpp = FE(b, 'g', 2);
      double hp = FE(b, 'h', 1), hpp = FE(b, 'h', 2), hppp = FE(b, 'h', 3);
      return cd::litQuadratic(C(fp * (1.0 - v0)), C(b.A * gpp + gp),
                              C(b.A * b.A * hppp + 3.0 * b.A * hpp + hp), 1);
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["V0"] = uniform(rng, 1.3, 2.1);
    };
    add(std::move(d));
  }

  // --- curvature-corrected dispersion ------------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "curvature_kdv";
    d.skeleton.equationSrc = "u_t + u_x + u_xxx + eps*(u_xx^2)_x = 0";
    d.skeleton.params = {"eps"};
    d.skeleton.literatureRelation = "L = (4εA/(-1 ± (1 - 8εA(A ± V))^(1/2)))^(1/2)";
    d.skeleton.sourceRef =
        "quoted width for the curvature-corrected third-order equation as written "
        "(linear convection u_x)";
    d.skeleton.notes =
        "The quoted width solves a quadratic whose leading group is (A ± V), i.e. it "
        "belongs to a u·u_x convection term; this equation as written has linear "
        "convection u_x, whose derived quadratic carries (1 - V) in that group. At "
        "large amplitude the derived width grows as A^(1/4) while the quoted one "
        "saturates. The companion u*u_x entry reproduces the quoted form exactly.";
    d.lit = [](const RB& b) {
      double eps = P(b, "eps");
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litQuadratic(C(b.A + s * b.V), C(1.0), C(2.0 * eps * b.A), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      // Keep the quoted form's (A - V) pivot clear of the branch guard.
      b.V = b.A * ((rng() & 1u) ? uniform(rng, 1.3, 2.5) : uniform(rng, 0.2, 0.75));
    };
    add(std::move(d));
  }
  {
    cd::EntryDef d;
    d.skeleton.id = "curvature_kdv_uux";
    d.skeleton.equationSrc = "u_t + u*u_x + u_xxx + eps*(u_xx^2)_x = 0";
    d.skeleton.params = {"eps"};
    d.skeleton.literatureRelation = "L = (4εA/(-1 ± (1 - 8εA(A ± V))^(1/2)))^(1/2)";
    d.skeleton.sourceRef =
        "same quoted width as the linear-convection entry; this variant's convection "
        "term matches the quoted (A ± V) group";
    d.skeleton.notes =
        "Convection variant u*u_x of the preceding entry - the form the quoted width "
        "actually solves: the derived quadratic (A ∓ V)L^4 + L^2 + 2εA = 0 has roots "
        "L^2 = (-1 ± (1 - 8εA(A ∓ V))^(1/2))/(2(A ∓ V)), which rationalize to the "
        "quoted 4εA/(-1 ∓ (...)^(1/2)).";
    d.lit = [](const RB& b) {
      double eps = P(b, "eps");
      std::vector<double> out;
      for (double s : {1.0, -1.0}) {
        auto v = cd::litQuadratic(C(b.A + s * b.V), C(1.0), C(2.0 * eps * b.A), 2);
        out.insert(out.end(), v.begin(), v.end());
      }
      return out;
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.V = b.A * ((rng() & 1u) ? uniform(rng, 1.3, 2.5) : uniform(rng, 0.2, 0.75));
    };
    add(std::move(d));
  }

  // --- stationary cubic Schrödinger balance ------------------------------------
  {
    cd::EntryDef d;
    d.skeleton.id = "schrod_length";
    d.skeleton.equationSrc = "-1/2*hbar^2/mass*psi_xx + En*psi - Vp*psi + a*psi^3 = 0";
    d.skeleton.params = {"hbar", "mass", "En", "Vp", "a"};
    d.skeleton.literatureRelation = "L = ħ/(2m(E - V) + aA^2)^(1/2)";
    d.skeleton.sourceRef =
        "quoted localization length for the stationary cubic Schrödinger balance";
    d.skeleton.notes =
        "The quoted length misses the factor 2m on the amplitude term relative to "
        "the derived ħ/(2m(E - V) + 2m·aA^2)^(1/2); the widths agree in scaling "
        "(L ~ 1/A at large amplitude) but differ by the O(1) factor (2m)^(1/2) on "
        "the amplitude group.";
    d.lit = [](const RB& b) {
      double hbar = P(b, "hbar"), mass = P(b, "mass");
      double En = P(b, "En"), Vp = P(b, "Vp"), a = P(b, "a");
      return cd::litLinear(C(hbar * hbar),
                           C(2.0 * mass * (En - Vp) + a * b.A * b.A), 2);
    };
    d.draw = [](std::mt19937& rng, RB& b) {
      b.params["En"] = uniform(rng, 1.4, 2.4);
      b.params["Vp"] = uniform(rng, 0.3, 0.9);
    };
    add(std::move(d));
  }

  return defs;
}

}  // namespace

const std::vector<cd::EntryDef>& cd::entry_defs() {
  static const std::vector<cd::EntryDef> defs = buildDefs();
  return defs;
}

const char* matchFlagName(MatchFlag f) {
  switch (f) {
    case MatchFlag::Exact: return "exact";
    case MatchFlag::ScalingOnly: return "scaling-only";
    case MatchFlag::Mismatch: return "mismatch";
  }
  return "mismatch";
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> out;
  for (const auto& def : cd::entry_defs()) {
    CatalogEntry e = def.skeleton;
    Expr ex = parse_equation(e.equationSrc, e.params);
    auto rels = scale_substitute(traveling_reduce(ex), e.mode);
    if (rels.empty()) throw ValidationFailure("catalog entry '" + e.id + "': empty relation");
    ScaleRelation rel = normalize(rels.front());
    e.relation = rel;
    e.relationText = renderRelation(rel);
    ScaleRelation solveRel = e.ansatz ? normalize(apply_ansatz(rel, *e.ansatz)) : rel;
    e.branches = solve_for_L(solveRel);
    e.engineLines = presentBranches(e.branches);
    e.matchFlag = cd::compute_match(def, e);
    out.push_back(std::move(e));
  }
  return out;
}

const CatalogEntry* find_entry(const std::vector<CatalogEntry>& entries,
                               const std::string& id) {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

const SolutionSpec* find_solution(const std::vector<SolutionSpec>& solutions,
                                  const std::string& id) {
  for (const auto& s : solutions)
    if (s.id == id) return &s;
  return nullptr;
}

}  // namespace osa
