#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osa/rational.hpp"
#include "osa/scale.hpp"

namespace osa {

// Rational linear form over exponent parameters; the solved width exponent q in
// L ~ A^q is one of these ("k-m", "-1/2", "0").
struct QForm {
  Rational constant = Rational(0);
  std::map<std::string, Rational> coeffs;  // no zero entries

  bool isConstant() const { return coeffs.empty(); }
  bool isZero() const { return coeffs.empty() && constant.isZero(); }
  std::string str() const;
};

struct BalanceObjective {
  enum class Kind { None, ConstantWidth, PowerLaw, MassInvariant, WidthPropVelocity };
  Kind kind = Kind::None;
  Rational q0 = Rational(0);  // PowerLaw target exponent
};

// The reduced exponent constraints a power-law width L ~ A^q imposes.
struct ExponentConstraint {
  QForm q;                              // the width exponent
  std::string qText;                    // e.g. "L ∝ A^(k-m)"
  std::vector<std::string> equalities;  // reduced constraints, e.g. "2k=m+n"
  std::string solutionDescription;      // chain form ("m=n+2=k+1") or joined singles
  bool satisfiable = true;
};

// Balance the amplitude exponents of the relation under L ~ A^q. The relation
// should already have any velocity ansatz applied; ansatzExponent carries the
// ansatz's amplitude exponent for the WidthPropVelocity objective.
ExponentConstraint exponent_balance(const ScaleRelation& relation,
                                    const BalanceObjective& objective,
                                    const std::optional<ExponentExpr>& ansatzExponent);

}  // namespace osa
