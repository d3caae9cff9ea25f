// Metric contraction, Gaussian-moment tensors and curvature normal forms.
#pragma once

#include "heatcas/expression.hpp"

namespace heatcas {

// Removes every metric factor that can be eliminated:
//   - g^{ab} g_{bc} chains and full traces g^{ab} g_{ab} -> d,
//   - a metric pairing two Gaussian-moment indices -> factor (d + 2p - 2)/2
//     with p the current moment-pair count,
//   - a metric contracting two slots of one curvature factor (Ricci / scalar
//     curvature formation, antisymmetric traces vanish),
//   - divergence-type contractions of derived curvature rewritten onto
//     derivatives of Ricci / scalar curvature (directed Bianchi rules).
// Runs to fixpoint.  Does not canonicalize.
void contract_metrics(Term& t);
Expression contract_metrics(Expression e);

// Expands the remaining moment indices of a term into an explicit sum over
// pairings, 2^{-p} per pairing, each pairing a product of down metrics.  The
// moment list becomes empty in every output term.
Expression expand_gslots(const Term& t);

// Full tensor normalization: contract, expand leftover moment indices that
// touch non-metric factors, re-contract, recognize quadratic curvature
// monomials, collect.
Expression tensor_normalize(Expression e);

// Recognizes full contractions of curvature products:
//   R_{abcd} R^{abcd} -> RiemannSq,   R_{abcd} R^{acbd} -> RiemannSq / 2,
//   Ric_{ab} Ric^{ab} -> RicciSq,    and removes metrics absorbed that way.
void recognize_curvature_squares(Term& t);

// The symmetrized moment tensor with 2p explicit down indices as a sum over
// pairings (coefficient 2^{-p} per pairing).
Expression build_moment_tensor(const std::vector<Index>& idx);

// Canonical projection along the cyclic identities: every Riemann factor is
// replaced by
//   R_{abcd} -> (2/3) R_{abcd} - (1/3) R_{acdb} - (1/3) R_{adbc}
// and every once-derived gauge-curvature atom by
//   D_a F_{bc} -> (2/3) D_a F_{bc} - (1/3) D_b F_{ca} - (1/3) D_c F_{ab}.
// Expressions equal modulo the first Bianchi identity (resp. the gauge
// Bianchi identity) become syntactically equal after this pass + collect.
Expression bianchi_normalize(Expression e);

} // namespace heatcas
