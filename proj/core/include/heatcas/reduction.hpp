// Leveling of the universal operators and pattern-based collection.
//
// Terms whose argument lists differ only by insertions of bare u factors
// describe the same underlying pattern at different operator levels k.  The
// expansion move rewrites X_{alpha,k} as the sum of the k+1 insertions of u
// at level k+1; leveling raises every member of a pattern class to the
// maximal observed k so that such terms can cancel or merge, then greedily
// lowers complete expansion images back down to keep the term count small.
#pragma once

#include "heatcas/expression.hpp"

namespace heatcas {

// The k+1 insertions of a bare u slot, one term per boundary position.
// The descriptor moves from (alpha_off, k) to (alpha_off + 1, k + 1).
// Requires a descriptor with k >= 0.
Expression expand_Ek(const Term& t);

// Signature of the term with bare u slots deleted, the coefficient ignored
// and the descriptor reduced to the level-invariant alpha_off - k.  Terms
// with equal keys are related by expansion moves.
std::string pattern_key(const Term& t);

// Raises every pattern class to its maximal observed k and collects.
Expression level_up(Expression e);

// level_up followed by a deterministic greedy lowering: a bare u slot is
// stripped whenever subtracting the corresponding expansion image does not
// increase the term count.  Idempotent on its own output.
Expression reduce_level(Expression e);

// True when a and b agree after raising both to a common level per pattern
// class; this is the equality test for presentations that differ only in
// their leveling choices.
bool equivalent_mod_level(const Expression& a, const Expression& b);

// Commutator lowering at a concrete dimension value.  Pairs of terms that
// differ only by one slot being (A u) versus (u A) with opposite
// coefficients form a commutator [A, u] in that slot; interior and tail
// commutator slots are traded for level k-1 combinations, at the cost of a
// factor 1/(1 - alpha) which forces a numeric dimension.  Slots where
// alpha = 1 (the pole of the rewrite) or where no printed identity applies
// (k = 1, or the commutator in the first slot) are left intact.
Expression commutator_rewrites(Expression e, const Rational& dim);

} // namespace heatcas
