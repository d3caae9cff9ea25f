// Numeric evaluation of whole expressions on concrete backgrounds.
//
// A background assigns a concrete dimension, a metric, a positive-definite
// base endomorphism u and a matrix (resp. scalar) value to every atom (resp.
// curvature factor) with concrete index values.  Abstract indices are summed
// honestly over 0..dim-1, leftover Gaussian-moment indices are expanded into
// their metric pairings first, and each X operator is evaluated through the
// spectral machinery.  Two symbolic presentations related by any of the
// operator identities (leveling, commutator trades, moment contractions)
// therefore evaluate to the same matrix, which is what the equivalence and
// self-consistency checks rely on.
#pragma once

#include "heatcas/expression.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>

namespace heatcas {

struct NumericBackground {
  int dim = 3;      // range of every abstract index
  double dval = 3;  // value substituted for the dimension symbol d
  Eigen::MatrixXd metric_up, metric_down; // dim x dim, mutual inverses
  Eigen::MatrixXd u;                      // positive definite, spectral base
  // Matrix value of an atom given concrete derivative and own indices.
  std::function<Eigen::MatrixXd(const NCAtom&, const std::vector<int>&,
                                const std::vector<int>&)>
      atom;
  // Value of a non-metric scalar factor given concrete indices.
  std::function<double(const ScalarFactor&, const std::vector<int>&,
                       const std::vector<int>&)>
      scalar;
};

// Value of one term / of a sum of terms on the background.  Throws
// std::invalid_argument on terms with unresolved derivative words (qderiv or
// pending entries), which have no pointwise value.
Eigen::MatrixXd evaluate(const Term& t, const NumericBackground& bg);
Eigen::MatrixXd evaluate(const Expression& e, const NumericBackground& bg);

// Background with a random well-conditioned metric, a random positive
// definite u (n x n) and independent random values for every distinct atom
// and curvature component.  Values are deterministic functions of (seed,
// component), independent of evaluation order.  Riemann and Ricci samples
// carry their index symmetries so that sign-normalized presentations match.
NumericBackground free_background(std::uint64_t seed, int n, int dim);

// Flat one-dimensional circle background at one sample point: metric 1, all
// curvature zero, gauge curvature zero.  value(base, m) must return the m-th
// x-derivative at the point of the coefficient named by base (U, Nvec or Q).
NumericBackground circle_background(
    const std::function<Eigen::MatrixXd(AtomBase, int)>& value);

} // namespace heatcas
