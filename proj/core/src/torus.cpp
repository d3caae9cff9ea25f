#include "heatcas/torus.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace heatcas {

namespace {

// Dense spectral differentiation matrices on the equispaced periodic grid
// x_j = 2 pi j / m (m even): exact on trigonometric polynomials up to the
// grid resolution.
Eigen::MatrixXd diff1(int m) {
  const double h = 2.0 * M_PI / m;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      if (j == k) continue;
      const int s = ((j - k) % 2 == 0) ? 1 : -1;
      d(j, k) = 0.5 * s / std::tan(0.5 * (j - k) * h);
    }
  return d;
}

Eigen::MatrixXd diff2(int m) {
  const double h = 2.0 * M_PI / m;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      if (j == k) {
        d(j, j) = -M_PI * M_PI / (3.0 * h * h) - 1.0 / 6.0;
        continue;
      }
      const int s = ((j - k) % 2 == 0) ? 1 : -1;
      const double sn = std::sin(0.5 * (j - k) * h);
      d(j, k) = -0.5 * s / (sn * sn);
    }
  return d;
}

struct Fit {
  double a0 = 0, a2 = 0, a0_err = 0, a2_err = 0;
};

// Heat trace by eigenvalue summation and least-squares extraction of the
// coefficients of sqrt(t) Tr e^{-tP} = a0 + a2 t + a4 t^2 + ...
Fit fit_on_grid(const MatrixFn& u, const MatrixFn& p, const MatrixFn& q, int grid,
                const std::vector<double>& ts) {
  const int n = static_cast<int>(u(0.0).rows());
  const Eigen::MatrixXd d1 = diff1(grid), d2 = diff2(grid);
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(grid * n, grid * n);
  for (int j = 0; j < grid; ++j) {
    const double x = 2.0 * M_PI * j / grid;
    const Eigen::MatrixXd uj = u(x), pj = p(x), qj = q(x);
    for (int k = 0; k < grid; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double v = uj(a, b) * d2(j, k) + pj(a, b) * d1(j, k);
          if (j == k) v += qj(a, b);
          op(j * n + a, k * n + b) = -v;
        }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(op, /*computeEigenvectors=*/false);
  const Eigen::VectorXcd lam = es.eigenvalues();

  const int m = static_cast<int>(ts.size());
  Eigen::MatrixXd basis(m, 3);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const double t = ts[i];
    std::complex<double> tr = 0;
    for (int j = 0; j < lam.size(); ++j) tr += std::exp(-t * lam[j]);
    y(i) = std::sqrt(t) * tr.real();
    basis(i, 0) = 1.0;
    basis(i, 1) = t;
    basis(i, 2) = t * t;
  }
  const Eigen::MatrixXd gram = basis.transpose() * basis;
  const Eigen::VectorXd coef = gram.ldlt().solve(basis.transpose() * y);
  const Eigen::VectorXd resid = y - basis * coef;
  const double dof = std::max(1, m - 3);
  const double s2 = resid.squaredNorm() / dof;
  const Eigen::MatrixXd cov = s2 * gram.inverse();
  Fit f;
  f.a0 = coef(0);
  f.a2 = coef(1);
  f.a0_err = std::sqrt(std::max(0.0, cov(0, 0)));
  f.a2_err = std::sqrt(std::max(0.0, cov(1, 1)));
  return f;
}

} // namespace

TorusFit heat_trace_oracle_torus1d(const MatrixFn& u, const MatrixFn& p, const MatrixFn& q,
                                   int grid, double t_min, double t_max,
                                   std::vector<double> t_list, double refine_tol) {
  if (t_list.empty()) {
    const int m = 12;
    for (int i = 0; i < m; ++i)
      t_list.push_back(t_min * std::pow(t_max / t_min, double(i) / (m - 1)));
  }
  if (grid % 2) ++grid;
  int fine = grid + grid / 2;
  if (fine % 2) ++fine;

  const Fit coarse = fit_on_grid(u, p, q, grid, t_list);
  const Fit refined = fit_on_grid(u, p, q, fine, t_list);

  const double drift0 = std::abs(refined.a0 - coarse.a0);
  const double drift2 = std::abs(refined.a2 - coarse.a2);
  TorusFit out;
  out.a0 = refined.a0;
  out.a2 = refined.a2;
  out.a0_err = refined.a0_err + drift0;
  out.a2_err = refined.a2_err + drift2;
  if (drift0 > refine_tol * std::max(1.0, std::abs(refined.a0)) ||
      drift2 > refine_tol * std::max(1.0, std::abs(refined.a2)))
    throw DiscretizationUnresolved("torus oracle: fit unstable under grid refinement");
  return out;
}

} // namespace heatcas
