// Numerical evaluation of the universal spectral functions I_{alpha,k} and
// of the operators X_{alpha,k} on concrete matrices, together with the
// brute-force oracles (simplex quadrature, Gauss-Hermite moments) used to
// certify the algebraic identities the symbolic engine relies on.
//
// I_{alpha,k}(r_0,...,r_k) is the integral over the ordered k-simplex of
// [sum_l (s_l - s_{l+1}) r_l]^{-alpha} (s_0 = 1, s_{k+1} = 0).  It equals
// the k-th divided difference, over the nodes r_0..r_k, of the k-th
// antiderivative of r^{-alpha}; that antiderivative lives in the family
// A r^p log r + B r^p, which is closed under both antidifferentiation and
// differentiation, so coincident nodes are handled by confluent divided
// differences with no special-casing of the integer-alpha log branches.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace heatcas {

// Relative gap below which nodes (or eigenvalues) are treated as coincident
// and the confluent derivative formulas are used.
inline constexpr double kCoincidenceTol = 1e-7;

// I_{alpha,k}(rs), rs.size() == k + 1, all entries > 0.
// Throws std::domain_error on non-positive nodes.
double eval_I(double alpha, int k, const std::vector<double>& rs);

// Independent oracle: nested adaptive Simpson quadrature over the ordered
// simplex.  k <= 4.  Throws std::domain_error on non-positive nodes.
double eval_I_quadrature(double alpha, int k, const std::vector<double>& rs,
                         double tol = 1e-9);

// The "partial" finite difference in the l-th slot (0 <= l <= k): inserts a
// node pair and divides, with the derivative limit at coincidence.  Used to
// verify Delta^(l) I_{alpha,k} = -alpha I_{alpha+1,k+1}.
double delta_I(double alpha, int k, int l, const std::vector<double>& rs_kp2);

// Spectral decomposition of a positive-definite symmetric matrix with
// eigenvalues clustered at relative gap kCoincidenceTol (one projection per
// spectral value).  Throws std::domain_error if u is not positive definite.
struct SpectralDecomposition {
  std::vector<double> values;          // strictly increasing cluster values
  std::vector<Eigen::MatrixXd> projs;  // orthogonal projections, sum = 1
};
SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& u);

// X_{alpha,k}[b_1 (x) ... (x) b_k] =
//   sum over (k+1)-tuples of spectral values of
//   I_{alpha,k}(r_{i0},...,r_{ik}) E_{i0} b_1 E_{i1} ... b_k E_{ik}.
// args.size() == k.  Throws std::domain_error if u is not positive definite.
Eigen::MatrixXd eval_X(double alpha, int k, const Eigen::MatrixXd& u,
                       const std::vector<Eigen::MatrixXd>& args);

// Same sum with a caller-supplied spectral function f(r_0..r_k) in place of
// I_{alpha,k}; used for the slot-collapse checks.
Eigen::MatrixXd eval_pi(const std::function<double(const std::vector<double>&)>& f, int k,
                        const Eigen::MatrixXd& u, const std::vector<Eigen::MatrixXd>& args);

// f(u) for a scalar function through the spectral decomposition.
Eigen::MatrixXd matrix_function(const Eigen::MatrixXd& u,
                                const std::function<double(double)>& f);

// Normalized Gaussian moment of order 2p for a positive-definite metric
// (all indices down): the expectation of xi_{mu_1}...xi_{mu_2p} under the
// weight e^{-g^{ab} xi_a xi_b}, divided by the weight's own integral times
// nothing else -- the normalization for which the order-2 moment is
// (1/2) g_{mu nu}.  Computed by tensor-product Gauss-Hermite quadrature
// after a Cholesky change of variables (exact for polynomial integrands),
// so it is independent of the symbolic pairing expansion.  d <= 4, p <= 3.
// The result is a flat row-major tensor with 2p indices of range d.
std::vector<double> gaussian_moment_oracle(int d, int p, const Eigen::MatrixXd& metric);

// Verifies d/dy f(u + y h) |_{y=0} against the finite-difference spectral
// formula sum_{ij} [f(r_i),f(r_j)] E_i h E_j, where [.,.] is the first
// divided difference.  f is r^{-alpha} (use_exp == false) or e^{-t r}.
struct DerivationCheckReport {
  double max_abs_err = 0;
  bool pass = false;
};
DerivationCheckReport function_calculus_derivation_check(const Eigen::MatrixXd& u0,
                                                         const Eigen::MatrixXd& h, bool use_exp,
                                                         double param);

// One JSON record per identity check: {"identity", "seed", "max_abs_err",
// "pass"}.  Runs the full randomized property suite (simplex recursions,
// expansion and commutator identities, quadrature cross-checks) and returns
// the records; all_pass is the conjunction.
struct SuiteResult {
  std::string json; // JSON array of records
  bool all_pass = false;
};
SuiteResult run_spectral_property_suite(std::uint64_t seed, int trials = 200);

} // namespace heatcas
