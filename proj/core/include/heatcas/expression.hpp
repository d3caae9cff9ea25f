// Sums of terms and the collection (canonicalize + merge) pass.
#pragma once

#include "heatcas/term.hpp"

#include <vector>

namespace heatcas {

using Expression = std::vector<Term>;

// Canonicalizes every term, merges equal signatures by adding coefficients,
// removes exact zeros and returns the result sorted by signature.
Expression collect(Expression e);

// expr * rational / expr * DimPoly
Expression scaled(Expression e, const DimPoly& f);

// a - b, collected.
Expression difference(const Expression& a, const Expression& b);

// Relabels indices of each term of b so they do not clash with a, then
// concatenates (no collection).
void append(Expression& a, const Expression& b);

std::string to_string(const Expression& e);

} // namespace heatcas
