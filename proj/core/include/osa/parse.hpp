#pragma once
#include <string>
#include <vector>

#include "osa/expr.hpp"

namespace osa {

// Parse DSL text of the form "<expr> = 0" into a canonical Expr.
// `params` lists the declared parameter identifiers; any other identifier
// (besides u, psi, i, V, sin, cos, f, g, h) is a ParseError.
Expr parse_equation(const std::string& src, const std::vector<std::string>& params = {});

// Emit canonical DSL text that re-parses to a structurally equal Expr.
std::string render(const Expr& e);

}  // namespace osa
