#include <cmath>
#include <complex>

#include "catalog_detail.hpp"
#include "osa/catalog.hpp"
#include "osa/errors.hpp"
#include "osa/parse.hpp"
#include "osa/verify.hpp"

namespace osa {

namespace cd = catalog_detail;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

double sech(double x) { return 1.0 / std::cosh(x); }

const cd::EntryDef& defFor(const std::string& equationId) {
  for (const auto& d : cd::entry_defs())
    if (d.skeleton.id == equationId) return d;
  throw ValidationFailure("no catalog entry for equation id '" + equationId + "'");
}

// Construction-time check: substitute the profile into its equation and
// require the residual oracle to pass at the stated tolerance.
void validate(const SolutionSpec& s, const Grid& grid, double tol) {
  const auto& def = defFor(s.equationId);
  Expr eq = parse_equation(def.skeleton.equationSrc, def.skeleton.params);
  ResidualReport rep = residual(eq, s, grid, tol);
  if (!(rep.relativeSupResidual <= tol))
    throw ValidationFailure("solution '" + s.id + "' failed validation: residual " +
                            std::to_string(rep.relativeSupResidual));
}

SolutionSpec kdvSech2() {
  SolutionSpec s;
  s.id = "kdv_sech2";
  s.equationId = "kdv6";
  s.form = "u = A sech^2((x - Vt)/L), L = (2/A)^(1/2), V = 2A";
  s.kind = "bright";
  s.amplitude = 2.0;
  s.widthParam = 1.0;  // (2/A)^(1/2) at A = 2
  s.velocity = 4.0;
  const double A = s.amplitude, L = s.widthParam;
  s.eval = [A, L](double x) -> std::complex<double> {
    double c = sech(x / L);
    return A * c * c;
  };
  s.knownRelations = {
      {"L = (2/A)^(1/2)", Provenance::Literature, "quoted beside the tabulated sech^2 row"},
      {"V = 2A", Provenance::Literature, "quoted beside the tabulated sech^2 row"},
      {"FWHM = 2 arccosh(2^(1/2)) L ≈ 1.7627 L", Provenance::Derived,
       "half-maximum algebra of sech^2"},
  };
  return s;
}

SolutionSpec mkdvSech() {
  SolutionSpec s;
  s.id = "mkdv_sech";
  s.equationId = "mkdv";
  s.form = "u = A sech((x - Vt)/L), L = 6^(1/2)/A, V = A^2/6";
  s.kind = "bright";
  s.amplitude = 1.5;
  s.widthParam = std::sqrt(6.0) / 1.5;
  s.velocity = 1.5 * 1.5 / 6.0;
  const double A = s.amplitude, L = s.widthParam;
  s.eval = [A, L](double x) -> std::complex<double> { return A * sech(x / L); };
  s.knownRelations = {
      {"L = 1/A, A = V^(1/2)", Provenance::Literature,
       "quoted beside the tabulated sech row; the pair solves the 6-normalized "
       "variant u_t + 6u^2 u_x + u_xxx = 0"},
      {"L = 6^(1/2)/A, V = A^2/6", Provenance::Derived,
       "residual-validated constants for u_t + u^2 u_x + u_xxx = 0"},
  };
  s.notes =
      "The quoted constants belong to the 6-normalized modified equation; this "
      "record stores the validated constants for the catalog's normalization "
      "alongside them.";
  return s;
}

SolutionSpec k22Compacton() {
  SolutionSpec s;
  s.id = "k22_compacton";
  s.equationId = "k22";
  s.form = "u = A cos^2((x - Vt)/4) on |x - Vt| <= 2π, else 0; A = 4V/3";
  s.kind = "compacton";
  s.velocity = 0.75;
  s.amplitude = 4.0 * s.velocity / 3.0;
  s.widthParam = 4.0;
  s.support = {{-2.0 * kPi, 2.0 * kPi}};
  const double A = s.amplitude;
  s.eval = [A](double x) -> std::complex<double> {
    if (std::fabs(x) >= 2.0 * kPi) return 0.0;
    double c = std::cos(x / 4.0);
    return A * c * c;
  };
  s.knownRelations = {
      {"L = 4; u = A cos^2((x - Vt)/4) on |x - Vt| <= 2π", Provenance::Literature,
       "quoted compacton row"},
      {"A = 4V/3", Provenance::Literature, "quoted compacton row"},
      {"FWHM = 2π (half-maximum at |x - Vt| = π)", Provenance::Derived,
       "cos^2 half-maximum algebra"},
  };
  return s;
}

SolutionSpec kak() {
  SolutionSpec s;
  s.id = "kak";
  s.equationId = "k22";
  s.form =
      "compact kink-antikink pair: A cos^2(ξ/4) rise on (-2π, 0), plateau A on "
      "[0, λ], mirrored fall on (λ, λ + 2π), else 0; λ = 3, A = 4V/3";
  s.kind = "compacton";
  s.velocity = 0.75;
  s.amplitude = 4.0 * s.velocity / 3.0;
  s.widthParam = 4.0;
  const double lam = 3.0;
  s.support = {{-2.0 * kPi, lam + 2.0 * kPi}};
  s.joints = {0.0, lam};
  const double A = s.amplitude;
  s.eval = [A, lam](double x) -> std::complex<double> {
    if (x <= -2.0 * kPi || x >= lam + 2.0 * kPi) return 0.0;
    if (x < 0.0) {
      double c = std::cos(x / 4.0);
      return A * c * c;
    }
    if (x <= lam) return A;
    double c = std::cos((x - lam) / 4.0);
    return A * c * c;
  };
  s.knownRelations = {
      {"compact kink-antikink pair with a free plateau length", Provenance::Literature,
       "quoted construction riding the compacton's edges"},
      {"V = 3A/4 per segment; the plateau u = A solves the equation exactly",
       Provenance::Derived, "each piece is a translate of the validated compacton"},
  };
  s.notes =
      "Interior joints at ξ = 0 and ξ = λ are only C^1 (u'' jumps), so residual "
      "evaluation masks a band around each, exactly as at the support edges.";
  return s;
}

SolutionSpec pedestalCompacton() {
  SolutionSpec s;
  s.id = "pedestal_compacton";
  s.equationId = "k22";
  s.form = "u = δ + A cos^2((x - Vt)/4) on |x - Vt| <= 2π, else δ; V = (3/4)(2δ + A)";
  s.kind = "pedestal-compacton";
  const double delta = 0.4;
  s.amplitude = 1.0;
  s.velocity = 0.75 * (2.0 * delta + s.amplitude);
  s.widthParam = 4.0;
  s.support = {{-2.0 * kPi, 2.0 * kPi}};
  const double A = s.amplitude;
  s.eval = [A, delta](double x) -> std::complex<double> {
    if (std::fabs(x) >= 2.0 * kPi) return delta;
    double c = std::cos(x / 4.0);
    return delta + A * c * c;
  };
  s.knownRelations = {
      {"V = (3/4)(2δ + A)", Provenance::Literature, "quoted pedestal-compacton speed"},
      {"V = 0 at A = -2δ (the pedestal turns static)", Provenance::Derived,
       "immediate from the speed relation"},
  };
  s.notes =
      "The profile tends to the pedestal value δ = 0.4 outside the support, not "
      "to zero; the compact core rides on a constant background that itself "
      "solves the equation.";
  return s;
}

SolutionSpec knn3Compacton() {
  SolutionSpec s;
  s.id = "knn3_compacton";
  s.equationId = "knn";
  s.params = {{"n", 3.0}};
  s.form = "u = A cos((x - Vt)/3) on |x - Vt| <= 3π/2, else 0; A = (3V/2)^(1/2), n = 3";
  s.kind = "compacton";
  s.velocity = 1.1;
  s.amplitude = std::sqrt(1.5 * s.velocity);
  s.widthParam = 3.0;
  s.support = {{-1.5 * kPi, 1.5 * kPi}};
  const double A = s.amplitude;
  s.eval = [A](double x) -> std::complex<double> {
    if (std::fabs(x) >= 1.5 * kPi) return 0.0;
    return A * std::cos(x / 3.0);
  };
  s.knownRelations = {
      {"L = 4n/(n-1), support |x - Vt| <= 2nπ/(n-1), inner amplitude A' = 2Vn/(n+1)",
       Provenance::Literature, "quoted general-n compacton row (cos^2 form)"},
      {"u = [A' cos^2((n-1)ξ/(2n))]^(1/(n-1)) validates with scale 2n/(n-1) (= 3 at "
       "n = 3) and support nπ/(n-1) - half the quoted values; the peak is A'^(1/2) "
       "with A' = 3V/2 at n = 3",
       Provenance::Derived,
       "residual check at n = 3; the quoted (scale, support) pair is internally "
       "consistent as written but does not satisfy the equation"},
  };
  s.notes =
      "The quoted width and support are both twice the validated ones; the quoted "
      "inner amplitude A' refers to the cos^2 form, whose square root is the "
      "profile peak stored here.";
  return s;
}

SolutionSpec burgersKink() {
  SolutionSpec s;
  s.id = "burgers_kink";
  s.equationId = "burgers";
  s.form = "u = V - 2κ tanh(κ(x - Vt)), κ = 0.7; deviation amplitude 2κ";
  s.kind = "kink";
  const double kappa = 0.7;
  s.velocity = 0.9;
  s.amplitude = 2.0 * kappa;
  s.widthParam = 1.0 / kappa;
  const double V = s.velocity;
  s.eval = [V, kappa](double x) -> std::complex<double> {
    return V - 2.0 * kappa * std::tanh(kappa * x);
  };
  s.knownRelations = {
      {"u = (C - V^2)^(1/2) tan((C - V^2)^(1/2)(x - Vt)/2 + D) + V",
       Provenance::Literature, "quoted traveling form"},
      {"u = V - 2κ tanh(κ(x - Vt)): the quoted form at C - V^2 = -4κ^2 "
       "(tan of an imaginary argument turns into tanh)",
       Provenance::Derived, "analytic continuation, residual-validated"},
      {"u = V + B tanh(κ(x - Vt)) solves the equation iff B = -2κ", Provenance::Derived,
       "coefficient matching in the traveling frame"},
  };
  return s;
}

SolutionSpec sineGordonKink() {
  SolutionSpec s;
  s.id = "sine_gordon_kink";
  s.equationId = "sine_gordon";
  s.form = "u = 4 arctan(e^(λ(x - Vt))), λ = 1.3, V = -1/λ^2 (light-cone form)";
  s.kind = "kink";
  const double lam = 1.3;
  s.velocity = -1.0 / (lam * lam);
  s.amplitude = kPi;  // half the asymptotic jump 2π
  s.widthParam = 1.0 / lam;
  s.eval = [lam](double x) -> std::complex<double> {
    return 4.0 * std::atan(std::exp(lam * x));
  };
  s.knownRelations = {
      {"u = A tan^(-1) γe^((x-Vt)/L) with ±VA/L^2 = sin A; if V = L^2, A = sin A",
       Provenance::Literature, "quoted kink row"},
      {"u = 4 arctan(e^(λ(x - Vt))), V = -1/λ^2 for u_xt = sin u; asymptotic jump "
       "2π, half-jump amplitude π",
       Provenance::Derived, "residual-validated"},
  };
  return s;
}

SolutionSpec nls3Soliton() {
  SolutionSpec s;
  s.id = "nls3_soliton";
  s.equationId = "nls3";
  s.form = "ψ = e^(iΩt) η sech(ηξ) e^(iVξ/2), ξ = x - Vt, Ω = η^2 + V^2/4";
  s.kind = "bright";
  s.complexField = true;
  const double eta = 1.2;
  s.velocity = 0.8;
  s.amplitude = eta;
  s.widthParam = 1.0 / eta;
  s.omega = eta * eta + s.velocity * s.velocity / 4.0;
  const double V = s.velocity;
  s.eval = [eta, V](double x) -> std::complex<double> {
    return eta * sech(eta * x) * std::exp(std::complex<double>(0.0, 0.5 * V * x));
  };
  s.knownRelations = {
      {"ψ = η0 e^(i(ωt + kx)) sech(η0(x - Vt)); L = 1/η0", Provenance::Literature,
       "quoted envelope-soliton row"},
      {"Ω = η^2 + V^2/4 in the traveling gauge; the quoted phases are k = V/2, "
       "ω = η^2 - V^2/4, related by Ω = ω + kV",
       Provenance::Derived, "phase-convention translation, residual-validated"},
  };
  return s;
}

SolutionSpec gp1dDark() {
  SolutionSpec s;
  s.id = "gp1d_dark";
  s.equationId = "gp1d";
  s.params = {{"a", 0.8}, {"v0", 0.2}};
  s.form =
      "ψ = n0^(1/2)(iV/c + γ tanh(γc(x - Vt))), n0 = (1 - v0)/a, c = (1 - v0)^(1/2), "
      "γ = (1 - V^2/c^2)^(1/2), Ω = 0";
  s.kind = "dark";
  s.complexField = true;
  s.velocity = 0.35;
  const double a = 0.8, v0 = 0.2, V = s.velocity;
  const double n0 = (1.0 - v0) / a;
  const double c = std::sqrt(1.0 - v0);
  const double gam = std::sqrt(1.0 - V * V / (c * c));
  s.amplitude = std::sqrt(n0) * (1.0 - V / c);  // modulus dip below the background
  s.widthParam = 1.0 / (gam * c);
  s.omega = 0.0;
  s.eval = [n0, c, gam, V](double x) -> std::complex<double> {
    return std::sqrt(n0) * std::complex<double>(gam * std::tanh(gam * c * x), V / c);
  };
  s.knownRelations = {
      {"ψ = ip + (v_c^2 - p^2)^(1/2) tanh(a(v_c^2 - p^2)^(1/2)(x - q(t))), "
       "v_c = (1 - aV)^(1/2); L = 1/(v_c^2 - p^2)^(1/2)",
       Provenance::Literature, "quoted dark-soliton text"},
      {"φ = n0^(1/2)(iV/c + γ tanh(γc ξ)): the quoted trailing factor 'a' inside "
       "tanh reads as the scale γc of the validated profile",
       Provenance::Derived, "residual-validated"},
  };
  return s;
}

SolutionSpec kumarCompacton() {
  SolutionSpec s;
  s.id = "kumar_compacton";
  s.equationId = "kdv6";
  s.form =
      "u = (32)^(1/2) k cos[k(x - 4k^2)t] / (3(1 - (2/3) cos[k(x - 4k^2 t)^2])) "
      "(as printed)";
  s.kind = "compacton";
  s.eval = nullptr;
  s.knownRelations = {
      {"L = π/(6k), that is L ~ 1/A", Provenance::Literature,
       "width claim accompanying the quoted trigonometric compacton"},
  };
  s.notes =
      "Notes-only: the printed expression mixes its phase arguments "
      "(k(x - 4k^2)t against cos[...]^2 with t inside the square) and cannot be "
      "read as a single-valued traveling profile; no evaluator is attached and "
      "no residual check is possible as printed.";
  return s;
}

SolutionSpec compositeOnKak() {
  SolutionSpec s;
  s.id = "composite_on_kak";
  s.equationId = "k22";
  s.form =
      "u = Σ_c η_c χ_c(x - V't) cos^2((x - V't)/4) riding the kink-antikink pair "
      "(as printed)";
  s.kind = "compacton";
  s.eval = nullptr;
  s.knownRelations = {
      {"V' = 3 max{η_c}/4 + 2V", Provenance::Literature,
       "modified speed printed with the composite construction"},
  };
  s.notes =
      "Notes-only: a short-lived composite of compacton segments carried by the "
      "kink-antikink pair, with indicator-function (χ) support bookkeeping; the "
      "printed expression leaves the segment amplitudes η_c and supports "
      "unspecified relative to each other, so it is recorded without an "
      "evaluator.";
  return s;
}

}  // namespace

namespace {

struct PlanRow {
  const char* id;
  SolutionSpec (*make)();
  Grid grid;
  double tol;
};

const std::vector<PlanRow>& planRows() {
  static const std::vector<PlanRow> rows = {
      {"kdv_sech2", &kdvSech2, Grid(-20.0, 20.0, 4096), 1e-8},
      {"mkdv_sech", &mkdvSech, Grid(-20.0, 20.0, 2049), 1e-8},
      {"k22_compacton", &k22Compacton, Grid(-16.0, 16.0, 4096), 1e-6},
      {"kak", &kak, Grid(-16.0, 16.0, 4096), 1e-6},
      {"pedestal_compacton", &pedestalCompacton, Grid(-16.0, 16.0, 4096), 1e-6},
      {"knn3_compacton", &knn3Compacton, Grid(-12.0, 12.0, 4096), 1e-6},
      {"burgers_kink", &burgersKink, Grid(-20.0, 20.0, 2049), 1e-8},
      {"sine_gordon_kink", &sineGordonKink, Grid(-20.0, 20.0, 4096), 1e-8},
      {"nls3_soliton", &nls3Soliton, Grid(-20.0, 20.0, 4096), 1e-8},
      {"gp1d_dark", &gp1dDark, Grid(-20.0, 20.0, 4096), 1e-8},
  };
  return rows;
}

}  // namespace

std::vector<SolutionSpec> build_solutions() {
  std::vector<SolutionSpec> out;
  for (const auto& row : planRows()) {
    SolutionSpec spec = row.make();
    validate(spec, row.grid, row.tol);
    out.push_back(std::move(spec));
  }
  out.push_back(kumarCompacton());
  out.push_back(compositeOnKak());
  return out;
}

std::optional<ValidationPlan> validation_plan(const std::string& solutionId) {
  for (const auto& row : planRows())
    if (solutionId == row.id) return ValidationPlan{row.grid, row.tol};
  return std::nullopt;
}

const std::vector<ScanFamily>& scan_families() {
  static const std::vector<ScanFamily> families = [] {
    std::vector<ScanFamily> fams;
    {
      ScanFamily f;
      f.solutionId = "kdv_sech2";
      f.description = "u = A sech^2(x/L), L = (2/A)^(1/2), V = 2A";
      f.featureKind = FeatureKind::Bright;
      f.predictedExponent = -0.5;
      f.fwhmFactor = 1.7627471740390861;  // 2*arccosh(sqrt(2))
      f.branchLabel = "L = |V - 6*A|^(-1/2)";
      f.member = [](double A) {
        SolutionSpec s = kdvSech2();
        double L = std::sqrt(2.0 / A);
        s.amplitude = A;
        s.widthParam = L;
        s.velocity = 2.0 * A;
        s.eval = [A, L](double x) -> std::complex<double> {
          double c = sech(x / L);
          return A * c * c;
        };
        return s;
      };
      f.gridFor = [](double A) {
        double L = std::sqrt(2.0 / A);
        return Grid(-15.0 * L, 15.0 * L, 4097);
      };
      fams.push_back(std::move(f));
    }
    {
      ScanFamily f;
      f.solutionId = "mkdv_sech";
      f.description = "u = A sech(x/L), L = 6^(1/2)/A, V = A^2/6";
      f.featureKind = FeatureKind::Bright;
      f.predictedExponent = -1.0;
      f.fwhmFactor = 2.6339157938496331;  // 2*arccosh(2)
      f.branchLabel = "L = |V - A^2|^(-1/2)";
      f.member = [](double A) {
        SolutionSpec s = mkdvSech();
        double L = std::sqrt(6.0) / A;
        s.amplitude = A;
        s.widthParam = L;
        s.velocity = A * A / 6.0;
        s.eval = [A, L](double x) -> std::complex<double> { return A * sech(x / L); };
        return s;
      };
      f.gridFor = [](double A) {
        double L = std::sqrt(6.0) / A;
        return Grid(-25.0 * L, 25.0 * L, 4097);
      };
      fams.push_back(std::move(f));
    }
    {
      ScanFamily f;
      f.solutionId = "k22_compacton";
      f.description = "u = A cos^2(x/4) on |x| <= 2π, V = 3A/4 (width independent of A)";
      f.featureKind = FeatureKind::Compacton;
      f.predictedExponent = 0.0;
      f.fwhmFactor = 1.5707963267948966;  // pi/2: cos^2 falls to 1/2 at L*pi/4
      f.branchLabel = "L = (8*A/|V - 2*A|)^(1/2)";
      f.member = [](double A) {
        SolutionSpec s = k22Compacton();
        s.amplitude = A;
        s.velocity = 0.75 * A;
        s.eval = [A](double x) -> std::complex<double> {
          if (std::fabs(x) >= 2.0 * kPi) return 0.0;
          double c = std::cos(x / 4.0);
          return A * c * c;
        };
        return s;
      };
      f.gridFor = [](double) { return Grid(-16.0, 16.0, 4097); };
      fams.push_back(std::move(f));
    }
    {
      ScanFamily f;
      f.solutionId = "knn3_compacton";
      f.description = "u = A cos(x/3) on |x| <= 3π/2, V = 2A^2/3 (width independent of A)";
      f.featureKind = FeatureKind::Compacton;
      f.predictedExponent = 0.0;
      f.fwhmFactor = 2.0943951023931953;  // 2*pi/3: cos falls to 1/2 at L*pi/3
      f.branchLabel = "L = (n^3/|alpha - n|)^(1/2)";
      f.member = [](double A) {
        SolutionSpec s = knn3Compacton();
        s.amplitude = A;
        s.velocity = 2.0 * A * A / 3.0;
        s.eval = [A](double x) -> std::complex<double> {
          if (std::fabs(x) >= 1.5 * kPi) return 0.0;
          return A * std::cos(x / 3.0);
        };
        return s;
      };
      f.gridFor = [](double) { return Grid(-12.0, 12.0, 4097); };
      fams.push_back(std::move(f));
    }
    return fams;
  }();
  return families;
}

const ScanFamily* find_family(const std::string& solutionId) {
  for (const auto& f : scan_families())
    if (f.solutionId == solutionId) return &f;
  return nullptr;
}

}  // namespace osa
