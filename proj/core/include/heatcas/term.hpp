// One summand of a heat-invariant expression.
#pragma once

#include "heatcas/dim_poly.hpp"
#include "heatcas/factors.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace heatcas {

// Which universal operator a term is attached to: alpha = d/2 + alpha_off,
// k slots.  p (half the number of Gaussian-moment indices) is not stored; it
// is the size of Term::gslots / 2 and shrinks as moment indices contract away
// while alpha stays fixed.
struct XDescriptor {
  int alpha_off = 0;
  int k = 1;

  auto operator<=>(const XDescriptor&) const = default;
};

struct Term {
  DimPoly coeff{Rational(1)};
  std::vector<ScalarFactor> scalars;   // commutative prefactors
  std::vector<Index> gslots;           // Gaussian-moment tensor indices (down, unordered)
  std::optional<XDescriptor> x;        // absent once collapsed to a plain product
  std::vector<std::vector<NCAtom>> args; // operator argument slots (each a product)
  std::vector<NCAtom> qfactors;        // right gauge factors (F-type atoms)
  std::vector<Index> qderiv;           // residual derivative word on the frame, outermost first

  bool is_zero() const { return coeff.is_zero(); }
};

// Structural signature of a term with the coefficient ignored.  Two terms
// with equal signatures after canonicalize() are the same symbol.
std::string signature(const Term& t);

// Full printable rendering (coefficient included), mainly for diagnostics.
std::string to_string(const Term& t);

// Rewrites the term into its canonical representative: factor-internal
// symmetries normalized (Riemann sign conventions folded into the
// coefficient), commutative factors deterministically ordered, and dummy
// labels renumbered 0..n-1 by traversal order.  The result is independent of
// the incoming labeling and factor order.
void canonicalize(Term& t);

// Visits every index of the term in the fixed traversal order
// (scalars, gslots, args, qfactors, qderiv).
void for_each_index(Term& t, const std::function<void(Index&)>& f);
void for_each_index(const Term& t, const std::function<void(const Index&)>& f);

// Applies an index-label substitution everywhere in the term.
void rename_indices(Term& t, const std::function<int(int)>& f);

// Highest index label used plus one (0 if none).
int index_label_end(const Term& t);

} // namespace heatcas
