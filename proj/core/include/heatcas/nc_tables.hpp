// Normal-coordinate jet values and the substitution of the operator
// coefficients by curvature expansions at the pinned point.
//
// The only hard-coded inputs are the metric jets at the pinned point; the
// Christoffel jets, the inverse-metric jets and the conversion between plain
// gauge derivatives and Levi-Civita-corrected derivatives are generated
// mechanically from them.
#pragma once

#include "heatcas/expression.hpp"

namespace heatcas {

// partial^n g_{ab} at the pinned point, n = dv.size() in 0..4.  The returned
// terms carry scalar factors only (metrics and curvature).
Expression metric_jet_down(const std::vector<Index>& dv, Index a, Index b, IndexGen& gen);

// partial^n g^{ab} at the pinned point, n in 0..4.
Expression metric_jet_up(const std::vector<Index>& dv, Index a, Index b, IndexGen& gen);

// partial^n Gamma^{c}_{ab} at the pinned point (c the up index), n in 0..3.
Expression christoffel_jet(const std::vector<Index>& dv, Index a, Index b, Index c_up,
                           IndexGen& gen);

// partial^n Gamma^{c} = partial^n (g^{ab} Gamma^{c}_{ab}), n in 0..3.
Expression christoffel_contracted_jet(const std::vector<Index>& dv, Index c_up, IndexGen& gen);

// The plain (gauge) m-th derivative of an atom expanded over
// Levi-Civita-corrected derivatives and curvature:
//     nabla_{nu_1 .. nu_m} X  =  nabhat^m X + lower-order curvature terms.
// Terms have one argument slot holding the hat-flavored atom.  `mu` is the
// upper index for AtomBase::Nvec and ignored otherwise.
Expression gauge_to_hat(AtomBase base, const std::vector<Index>& nu, Index mu_up, IndexGen& gen);

// Replaces the pre-substitution atoms H, L, Q0 (and any remaining plain-gauge
// derivatives of u, q, N) by their normal-coordinate curvature expansions;
// every surviving atom is hat-flavored.
Expression substitute_normal_coordinates(const Expression& e);

} // namespace heatcas
