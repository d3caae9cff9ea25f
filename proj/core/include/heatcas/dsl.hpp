// Compact textual notation for terms, used by the test fixtures.
//
// One term per line, e.g.
//
//   -1/2 (d+2) g^{m n} X{1,3}[ u | D{m n} u | u ]
//   +1/12 X{-1,1}[ u ] F_{a b} F_{c d} g^{a c} g^{b d}
//
// Coefficient: optional sign, optional rational, then any number of
// parenthesized polynomials in d.  Scalar factors: g^{..}/g_{..}, R_{abcd},
// Ric_{ab}, Sc, RR (full Riemann square), RicRic; a D{..} / Dg{..} prefix
// attaches (hat resp. gauge) derivative indices to the next factor or atom.
// G{..} lists Gaussian-moment indices.  X{alpha_off,k}[s1|...|sk] carries the
// operator slots; atoms are u, q, q0, N^{a}, F_{a b}, H^{a b}, L^{a}.  Atoms
// written outside the slot brackets become right gauge factors, and Dv{..}
// is the residual derivative word on the gauge frame.  Lines starting with #
// and blank lines are skipped.
#pragma once

#include "heatcas/expression.hpp"

#include <string>

namespace heatcas {

Term parse_term(const std::string& line);
Expression parse_expression(const std::string& text);

// Renders a term in (approximately) the same notation; parse(render(t))
// round-trips the structure.
std::string render_term(const Term& t);

} // namespace heatcas
