// Independent numeric oracle: heat trace of P = -(u d^2 + p d + q) on the
// circle of length 2 pi, with matrix-valued periodic coefficients.
//
// The operator is discretized with dense spectral differentiation matrices
// on an equispaced grid, the heat trace is computed by eigenvalue summation
// for a ladder of times, and the leading asymptotics
//     Tr e^{-tP} ~ t^{-1/2} (a_0 + a_2 t + O(t^2))
// is extracted by a least-squares fit.  The fit is repeated on a refined
// grid; an unstable fit raises DiscretizationUnresolved.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

namespace heatcas {

struct DiscretizationUnresolved : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TorusFit {
  double a0 = 0, a2 = 0;      // fitted asymptotic coefficients
  double a0_err = 0, a2_err = 0; // one-sigma fit errors plus refinement drift
};

using MatrixFn = std::function<Eigen::MatrixXd(double)>;

// u(x) must be symmetric positive definite for every x; p, q arbitrary
// smooth periodic matrix functions of the same size.  An empty t_list means
// a log-spaced ladder in [t_min, t_max].
TorusFit heat_trace_oracle_torus1d(const MatrixFn& u, const MatrixFn& p, const MatrixFn& q,
                                   int grid = 256, double t_min = 1e-3, double t_max = 1e-1,
                                   std::vector<double> t_list = {},
                                   double refine_tol = 1e-2);

} // namespace heatcas
