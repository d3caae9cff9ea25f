// Commutative scalar factors and noncommutative endomorphism atoms.
#pragma once

#include "heatcas/index.hpp"

#include <string>
#include <vector>

namespace heatcas {

// Commutative prefactors.  Curvature tensors are stored with all of their own
// indices down; raising is always through explicit MetricUp factors.
enum class ScalarSym : std::uint8_t {
  MetricUp,   // g^{ab}
  MetricDown, // g_{ab}
  Riemann,    // R_{abcd}, antisymmetric in (ab) and (cd), symmetric under pair swap
  Ricci,      // Ric_{ab} = g^{uv} R_{a u v b}, symmetric
  ScalarCurv, // scalar curvature
  RiemannSq,  // R_{abcd} R^{abcd}
  RicciSq,    // Ric_{ab} Ric^{ab}
};

struct ScalarFactor {
  ScalarSym sym{};
  std::vector<Index> deriv; // hat-covariant derivative indices, outermost first (down)
  std::vector<Index> idx;   // the factor's own index slots

  auto operator<=>(const ScalarFactor&) const = default;
};

// Noncommutative atoms.  U/Q/Nvec/F are the post-substitution basis; H, L and
// Q0 appear only while the symbol-propagation stage runs, and V never appears
// in slots (it tags the residual derivative word acting on the gauge frame).
enum class AtomBase : std::uint8_t {
  U,    // the leading coefficient endomorphism
  Q,    // zeroth-order coefficient of the operator
  Nvec, // first-order coefficient N^mu (one upper index)
  F,    // gauge curvature F_{ab} (two lower antisymmetric indices)
  H,    // pre-substitution principal-symbol coefficient H^{mu nu}
  L,    // pre-substitution first-order coefficient L^mu
  Q0,   // pre-substitution zeroth-order coefficient
};

struct NCAtom {
  AtomBase base{};
  bool hat = false;           // true once derivatives are Levi-Civita-corrected
  std::vector<Index> deriv;   // covariant derivative indices, outermost first (down)
  std::vector<Index> idx;     // atom's own indices (H: 2 up, L/Nvec: 1 up, F: 2 down)
  std::vector<Index> pending; // unresolved right-acting derivative indices (pre-substitution)
  bool sym = false;           // derivative word totally symmetrized (normal form after
                              // the curvature split; trivially true for words of length <= 1)

  auto operator<=>(const NCAtom&) const = default;
};

inline NCAtom atom_u() { return NCAtom{AtomBase::U, true, {}, {}, {}}; }
inline NCAtom atom_q() { return NCAtom{AtomBase::Q, true, {}, {}, {}}; }

} // namespace heatcas
