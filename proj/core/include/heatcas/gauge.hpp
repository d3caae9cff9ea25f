// Gauge-structure normal forms.
//
// Two passes turn the raw propagated terms into the manifestly covariant
// basis used by the reduction and the published tables:
//
//   * assemble_gauge_words eliminates every residual derivative word acting
//     on the gauge frame.  The frame derivatives are compositions of the
//     gauge covariant derivative acting on a covariantly constant section,
//     so they compose freely and their only relation is the commutator
//     [nabla_a, nabla_b] = F_{ab}; in particular the defining identities
//
//       F_{ab}            = n_ab - n_ba
//       (nabla_a F)_{bc}  = n_abc - n_acb - n_bca + n_cba
//       F_{ab} F_{cd}     = n_abcd - n_abdc - n_bacd + n_badc
//
//     are exact with no curvature remainder.  Working from the highest word
//     degree down, each degree sector is matched against the image of these
//     combinations through a generalized inverse in the rational group
//     algebra of the symmetric group.  A sector outside the image (in
//     particular a surviving single-derivative word) means the input was not
//     gauge covariant and raises GaugeAnomaly.
//
//   * split_hat_derivatives rewrites every atom derivative word of length
//     two or more into the totally symmetrized word (the `sym` atom flag)
//     plus explicit gauge-curvature commutators and Riemann corrections, so
//     that syntactically distinct orderings of the same word never survive
//     to the collected output.
#pragma once

#include "heatcas/expression.hpp"

#include <map>
#include <stdexcept>

namespace heatcas {

struct GaugeAnomaly : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Removes every qderiv word, emitting F / nabla F / F F right factors.
// The result is keyed by the degree of the word each output term was
// assembled from; degree-0 terms pass through untouched under key 0.
std::map<int, Expression> assemble_gauge_sectors(Expression e);

// Sum of all sectors.
Expression assemble_gauge_words(Expression e);

// Symmetrization normal form for atom derivative words (slots and right
// gauge factors).  Terms must not carry unresolved pending derivatives.
Expression split_hat_derivatives(Expression e);

} // namespace heatcas
