// End-to-end computation of the heat coefficients R_0, R_2, R_4.
#pragma once

#include "heatcas/expression.hpp"
#include "heatcas/numeric_eval.hpp"

#include <map>
#include <string>

namespace heatcas {

struct Assumptions {
  bool n_zero = false;     // N^mu = 0
  bool u_parallel = false; // hat-nabla u = 0
  bool u_identity = false; // u = 1 (implies u_parallel)
  bool flat = false;       // vanishing Riemannian curvature
};

struct HeatResult {
  int order = 0;
  // R_{order, degree}: keyed by the gauge-structure degree the terms were
  // assembled from (0 = no gauge curvature factor, 2 = F, 3 = nabla F,
  // 4 = F F).  For order 4 all keys 0..4 are present; degree 1 is empty.
  std::map<int, Expression> sectors;
  // Implicit prefactor of every sector, applied by numeric_evaluate_R.
  std::string normalization = "(4 pi)^(-d/2)";
};

// Sum of all sectors.
Expression merged(const HeatResult& h);

// Applies the assumption flags as atom substitutions and drops the terms
// they annihilate.  Idempotent.
Expression apply_assumptions(Expression e, Assumptions a);

// The full pipeline at order r in {0, 2, 4}.
HeatResult compute_R(int order, const Assumptions& a = {});

// Specializes an already-computed result under stronger assumptions.
HeatResult specialize(HeatResult h, const Assumptions& a);

// Value of R_order on the background, including the (4 pi)^{-d/2} prefactor.
Eigen::MatrixXd numeric_evaluate_R(const HeatResult& h, const NumericBackground& bg);

} // namespace heatcas
