#pragma once
#include <map>
#include <string>
#include <vector>

#include "osa/scale.hpp"

namespace osa {

// One solved width branch (or constraint) of a normalized relation.
struct BranchSolution {
  enum class Kind { Explicit, Implicit, Constraint };
  Kind kind = Kind::Explicit;

  std::string expression;                  // display form, e.g. "L = |V - 6*A|^(-1/2)"
  std::map<std::string, int> signChoices;  // subset of {"sigma","tau","root"} -> +-1
  std::string validity;

  // Explicit payload: the relation cleared of width denominators reads
  // c2*x^2 + c1*x + c0 = 0 with x = L^gPower (c2 empty for linear branches).
  long gPower = 0;
  bool quadratic = false;
  std::vector<ScaleTerm> c2, c1, c0;

  // The sigma/tau-specialized normalized relation; residual checks evaluate this.
  ScaleRelation specialized;
};

// Solve the (normalized) relation for the width. Enumerates the sign symbol,
// the velocity sign, and quadratic root choices, deduplicating branches that
// predict identical width magnitudes.
std::vector<BranchSolution> solve_for_L(const ScaleRelation& relation);

// Width magnitude the branch predicts at a sample point (b.L is ignored).
// Returns NaN when inadmissible: vanishing pivot, or - when
// requirePositiveRealRoot - a root that is not real and positive as needed
// for a real width with even gPower.
double branchAbsL(const BranchSolution& br, const RelationBindings& b,
                  bool requirePositiveRealRoot);

// Joint display of a branch list: velocity-sign twins merge into one line
// with "+-" markers (e.g. "L = |V +- 6*A|^(-1/2)"); others render singly.
std::vector<std::string> presentBranches(const std::vector<BranchSolution>& branches);

}  // namespace osa
