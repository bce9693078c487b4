#pragma once
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace osa {

// Where a recorded closed-form relation comes from: quoted from the source
// literature as printed, or derived/corrected here and checked numerically.
enum class Provenance { Literature, Derived };

inline const char* provenanceName(Provenance p) {
  return p == Provenance::Literature ? "literature" : "derived";
}

// One closed-form relation attached to a solution (width/velocity/frequency
// constants and the like), with its origin and a short free-form source note.
struct KnownRelation {
  std::string text;
  Provenance provenance = Provenance::Derived;
  std::string source;  // e.g. a quoted formula, or the check that derived it
};

// A concrete localized traveling solution of one catalog equation, given as a
// profile evaluator at t = 0. Traveling means u(x,t) = e^{i*omega*t} phi(x - V t)
// with omega = 0 for real fields, so time derivatives act as (i*omega - V d/dx).
//
// Entries with no evaluator (eval == nullptr) are notes-only: a quoted form
// that could not be validated as printed, kept for the record with an
// explanation in `notes`.
struct SolutionSpec {
  std::string id;
  std::string equationId;
  std::string form;  // human-readable closed form
  std::string kind;  // "bright" | "kink" | "dark" | "compacton" | "pedestal-compacton"
  bool complexField = false;

  double amplitude = 0.0;   // nominal A of the family member
  double widthParam = 0.0;  // the family's width parameter (not the FWHM)
  double velocity = 0.0;    // V
  double omega = 0.0;       // phase frequency for envelope solutions

  std::map<std::string, double> params;  // equation parameter values
  std::function<std::complex<double>(double)> eval;  // profile at t = 0

  // Compact support interval, if any; the profile must vanish (or be constant)
  // outside it and the derivative discontinuities sit on its edges.
  std::optional<std::pair<double, double>> support;

  // Interior points where the profile is only piecewise smooth (e.g. the
  // plateau joints of a compact kink-antikink pair). Residual evaluation
  // excludes a band around each, exactly as it does for support edges.
  std::vector<double> joints;

  // Closed-form width/velocity/frequency relations for this family, each
  // tagged with its provenance.
  std::vector<KnownRelation> knownRelations;

  std::string notes;
};

}  // namespace osa
