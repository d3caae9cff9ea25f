// Seed arguments of the heat-trace expansion and the propagation of the
// derivative operators they contain.
//
// A seed term holds slot arguments whose atoms may carry a `pending` word of
// right-acting covariant derivatives.  Propagation resolves these pending
// derivatives one by one (always the rightmost one of the last slot carrying
// any) into the three kinds of contributions: a derivative landing on a later
// argument, a fresh principal-symbol insertion with two new moment indices,
// and a derivative word accumulating on the right gauge frame.
#pragma once

#include "heatcas/expression.hpp"

namespace heatcas {

// Arguments whose moment integrals produce the order-r heat factor,
// r in {0, 2, 4}.  No descriptors are set and pending derivatives remain.
Expression volterra_seeds(int r);

// Resolves every pending derivative.
Expression propagate(Expression e);

// Sets the spectral descriptor of each term from its shape:
// k = slot count, alpha offset = (number of moment indices) / 2.
void assign_descriptors(Expression& e);

} // namespace heatcas
