#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "osa/scale.hpp"
#include "osa/solution.hpp"
#include "osa/solve.hpp"
#include "osa/verify.hpp"

namespace osa {

// Verdict of the automated comparison between the width relation derived by
// the engine and the closed form reported in the literature for the same row.
//
//   Exact       - over randomized admissible parameter draws, both formulas
//                 predict the same set of width magnitudes (up to branch
//                 enumeration and overall signs).
//   ScalingOnly - the predicted |L| sets differ by O(1) factors, but the
//                 large-amplitude power-law exponents of every branch agree.
//   Mismatch    - even the scaling exponents differ, or one side predicts
//                 widths where the other predicts none.
enum class MatchFlag { Exact, ScalingOnly, Mismatch };

const char* matchFlagName(MatchFlag f);  // "exact" | "scaling-only" | "mismatch"

// One catalog row: an equation, the width relation derived and solved here,
// the literature relation quoted verbatim, and the computed verdict.
struct CatalogEntry {
  std::string id;
  std::string equationSrc;          // DSL source of the equation
  std::vector<std::string> params;  // declared symbolic parameters
  ScaleRelation::Mode mode = ScaleRelation::Mode::Real;
  std::optional<Ansatz> ansatz;     // velocity ansatz the quoted row assumes

  std::string literatureRelation;   // the quoted closed form, as printed
  std::string sourceRef;            // quoted context: neighboring formulas, row text

  ScaleRelation relation;                // normalized derived relation (no ansatz)
  std::string relationText;              // renderRelation(relation)
  // Width branches of the relation, with the ansatz (if any) applied first.
  std::vector<BranchSolution> branches;
  std::vector<std::string> engineLines;  // presentBranches(branches)

  MatchFlag matchFlag = MatchFlag::Mismatch;
  std::string notes;  // never empty for non-exact entries
};

// Build the full catalog: parse every equation, derive and solve its width
// relation, and compute the match flag against the quoted literature form.
// Deterministic; throws only on internal inconsistency.
std::vector<CatalogEntry> build_catalog();

// Exact-solution specs. Every spec carrying an evaluator is validated against
// the residual oracle during construction (ValidationFailure on any failure);
// specs with eval == nullptr are notes-only records of quoted forms that do
// not validate as printed.
std::vector<SolutionSpec> build_solutions();

const CatalogEntry* find_entry(const std::vector<CatalogEntry>& entries,
                               const std::string& id);
const SolutionSpec* find_solution(const std::vector<SolutionSpec>& solutions,
                                  const std::string& id);

// An amplitude-parameterized family of solutions for width sweeps, with the
// grid and feature kind used to measure each member.
struct ScanFamily {
  std::string solutionId;
  std::string description;  // how the amplitude parameterizes the family
  FeatureKind featureKind = FeatureKind::Bright;
  double predictedExponent = 0.0;  // d log W / d log A from the derived relation
  std::function<SolutionSpec(double)> member;
  std::function<Grid(double)> gridFor;
  // FWHM of a member is fwhmFactor * widthParam (waveform-shape constant).
  double fwhmFactor = 1.0;
  std::string branchLabel;  // the derived width branch this family realizes
};

// The grid and tolerance under which build_solutions() validated a solution.
// No value for notes-only records (they carry no evaluator).
struct ValidationPlan {
  Grid grid;
  double tolerance = 1e-6;
};
std::optional<ValidationPlan> validation_plan(const std::string& solutionId);

// Families supported by `scan` (a subset of the catalog's solutions).
const std::vector<ScanFamily>& scan_families();
const ScanFamily* find_family(const std::string& solutionId);

// Markdown discrepancy report: the sign conventions in force, then one table
// row per catalog entry (quoted form, derived branches, flag, notes).
std::string render_report(const std::vector<CatalogEntry>& entries);

// JSON document with one object per entry (ids, sources, relations, flags,
// provenance) - the serialized form consumed by `osa report --catalog`.
std::string catalog_to_json(const std::vector<CatalogEntry>& entries);

// Parse a document produced by catalog_to_json. The display fields used by
// render_report round-trip; solved branch internals are not serialized.
std::vector<CatalogEntry> catalog_from_json(const std::string& text);

}  // namespace osa
