// Deterministic LaTeX rendering of canonical expressions: one term per line,
// the X_k shorthand for operators at the standard offset, and factored
// dimension polynomials.
#pragma once

#include "heatcas/expression.hpp"

#include <string>

namespace heatcas {

std::string export_latex(const Expression& e);

} // namespace heatcas
