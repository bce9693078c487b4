#pragma once
#include <string>
#include <vector>

#include "osa/expr.hpp"
#include "osa/scale.hpp"

namespace osa {

// One power term of a diffusion flux g(u): coeff * u^power.
struct DiffusionTerm {
  Coefficient coeff;
  ExponentExpr power;
};

struct DiffusionResult {
  std::vector<DiffusionTerm> powerTerms;
  std::string logCoefficient = "C3";  // coefficient name of the log(u) term
  std::string constantName = "C4";    // additive constant of integration
  std::string rendered;               // "g(u) = ..."
};

// Given an advection flux f(u) and a dispersion flux h(u), both sums of power
// monomials in the field, return the diffusion flux g(u) for which the
// width-scaled profile equation
//   L^2*f'(u)*(1 - V0) + L*(u*g''(u) + g'(u)) + (u^2*h'''(u) + 3*u*h''(u) + h'(u)) = 0
// closes under two quadratures.
DiffusionResult compatible_diffusion(const Expr& f, const Expr& h,
                                     const std::string& widthName = "L",
                                     const std::string& v0Name = "V0");

// Residual of the profile equation above for a candidate g (power terms plus
// C3*log(u)); empty when g is compatible.
Expr profile_residual(const Expr& f, const Expr& h, const DiffusionResult& g,
                      const std::string& widthName = "L",
                      const std::string& v0Name = "V0");

// The normalized width relation of u_t + f(u)_x + g(u)_xx + h(u)_xxx = 0.
ScaleRelation fgh_relation();

}  // namespace osa
