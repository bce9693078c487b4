#pragma once
// Internals shared by the catalog translation units; not installed.
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "osa/catalog.hpp"
#include "osa/scale.hpp"

namespace osa::catalog_detail {

// Literature-side width predictor: the |L| magnitudes the quoted closed form
// yields at one evaluation point. Empty when the form predicts none there
// (vanishing pivot or discriminant, mirroring the engine's branch guards).
using LitEval = std::function<std::vector<double>(const RelationBindings&)>;

// Randomized evaluation point filler. The defaults draw A, V, every equation
// parameter, and generic function values; entries override to honor pivots
// and implicit constraints of the quoted formula (e.g. 2k = m + n).
using DrawFill = std::function<void(std::mt19937&, RelationBindings&)>;

struct EntryDef {
  CatalogEntry skeleton;  // id .. sourceRef and notes filled by the table
  LitEval lit;            // null for entries using a special matcher
  DrawFill draw;          // null => default draw
  std::vector<std::string> ansatzParams;  // extra names the draw must bind

  // Special matchers.
  bool constraintMatch = false;        // compare a Constraint branch's text
  std::string constraintExpect;        // expected constraint display
  bool coefficientTriple = false;      // gkdv5-style grouped-coefficient match
};

const double kPivotGuard = 5e-2;  // mirrors the branch admissibility guards

// |x|^(1/g); NaN when |x| underflows.
double absRootMag(std::complex<double> x, long g);

// Width magnitudes of num/den = x with x = L^g; empty when |den| < guard.
std::vector<double> litLinear(std::complex<double> num, std::complex<double> den,
                              long g);

// Width magnitudes of both roots of c2 x^2 + c1 x + c0 = 0 with x = L^g;
// empty when the leading coefficient or discriminant is below the guard.
std::vector<double> litQuadratic(std::complex<double> c2, std::complex<double> c1,
                                 std::complex<double> c0, long g);

// Engine-side width magnitudes at one point: every explicit branch's
// branchAbsL with requirePositiveRealRoot = false, NaN dropped.
std::vector<double> engineWidths(const std::vector<BranchSolution>& branches,
                                 const RelationBindings& b);

// Sorted + deduplicated (relative 1e-9) copy.
std::vector<double> canonicalSet(std::vector<double> vals);

// The randomized comparison described on MatchFlag: exact set equality over
// draws, else large-amplitude scaling probe, else mismatch.
MatchFlag compute_match(const EntryDef& def, const CatalogEntry& entry);

// gkdv5: compare the three width-power coefficient groups against the quoted
// polynomial at concrete (n, l) with m = p = n + l.
MatchFlag match_coefficient_triple(const EntryDef& def);

// The full definition table, in report order.
const std::vector<EntryDef>& entry_defs();

}  // namespace osa::catalog_detail
