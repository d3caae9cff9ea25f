#include "heatcas/spectral.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace heatcas {

namespace {

// ---------------------------------------------------------------------------
// The function family A r^p log r + B r^p, closed under antidifferentiation
// and differentiation.  The k-th antiderivative of r^{-alpha} lives here for
// every real alpha, including the integer values 1..k where the plain
// monomial formula has a pole and a logarithm enters instead.
// ---------------------------------------------------------------------------

// Wide float used when nodes nearly coincide: the divided-difference table
// amplifies any inconsistency between its function rows and its derivative
// rows by a power of the inverse gap, so the dangerous zone between the
// snap threshold and well-separated nodes is evaluated entirely -- the
// coefficient chain included -- with enough guard digits to make that
// amplification irrelevant.
using Wide = boost::multiprecision::cpp_bin_float_50;

template <typename S> struct LP {
  S p{}; // exponent
  S a{}; // coefficient of r^p log r
  S b{}; // coefficient of r^p
};
template <typename S> using LogPow = std::vector<LP<S>>;

template <typename S> LogPow<S> antiderivative(const LogPow<S>& f) {
  using std::abs;
  LogPow<S> out;
  out.reserve(f.size());
  for (const auto& t : f) {
    if (abs(t.p + 1) < 1e-12) {
      // a log-squared term would need a != 0 at p = -1, which never occurs
      // when starting from a single power r^{-alpha}
      out.push_back({S(0), t.b, S(0)}); // integral of b/r is b log r
      if (abs(t.a) > 0) out.push_back({S(0), S(0), t.a}); // defensive, unreachable
    } else {
      const S q = t.p + 1;
      out.push_back({q, t.a / q, t.b / q - t.a / (q * q)});
    }
  }
  return out;
}

template <typename S> LogPow<S> derivative(const LogPow<S>& f) {
  LogPow<S> out;
  out.reserve(f.size());
  for (const auto& t : f) out.push_back({t.p - 1, t.a * t.p, t.a + t.b * t.p});
  return out;
}

double lp_eval(const LogPow<double>& f, double r) {
  double s = 0;
  const double lr = std::log(r);
  for (const auto& t : f) s += (t.a * lr + t.b) * std::pow(r, t.p);
  return s;
}

Wide lp_eval(const LogPow<Wide>& f, const Wide& r) {
  Wide s = 0;
  const Wide lr = log(r);
  for (const auto& t : f) s += (t.a * lr + t.b) * pow(r, t.p);
  return s;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Sorts the nodes and snaps groups within the relative coincidence gap to a
// common value so the divided-difference table can detect repetitions by
// exact equality.
std::vector<double> cluster_nodes(std::vector<double> rs) {
  std::sort(rs.begin(), rs.end());
  std::size_t i = 0;
  while (i < rs.size()) {
    std::size_t j = i + 1;
    double sum = rs[i];
    while (j < rs.size() && rs[j] - rs[j - 1] <= kCoincidenceTol * std::abs(rs[j])) {
      sum += rs[j];
      ++j;
    }
    const double mean = sum / static_cast<double>(j - i);
    for (std::size_t m = i; m < j; ++m) rs[m] = mean;
    i = j;
  }
  return rs;
}

// Confluent divided difference of order nodes.size()-1 over sorted nodes
// with exact repetitions, for the n_anti-th antiderivative of r^{-alpha}.
template <typename S>
S confluent_dd(double alpha, int n_anti, const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<LogPow<S>> derivs(n);
  LogPow<S> f{{S(-alpha), S(0), S(1)}};
  for (int i = 0; i < n_anti; ++i) f = antiderivative(f);
  derivs[0] = f;
  for (std::size_t m = 1; m < n; ++m) derivs[m] = derivative(derivs[m - 1]);
  std::vector<std::vector<S>> d(n, std::vector<S>(n, S(0)));
  for (std::size_t i = 0; i < n; ++i) d[i][0] = lp_eval(derivs[0], S(nodes[i]));
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i + j < n; ++i) {
      if (nodes[i + j] == nodes[i])
        d[i][j] = lp_eval(derivs[j], S(nodes[i])) / S(factorial(static_cast<int>(j)));
      else
        d[i][j] = (d[i + 1][j - 1] - d[i][j - 1]) / (S(nodes[i + j]) - S(nodes[i]));
    }
  return d[0][n - 1];
}

// Divided difference of order nodes.size()-1 of the n_anti-th antiderivative
// of r^{-alpha}.
double power_dd(double alpha, int n_anti, const std::vector<double>& rs) {
  const std::vector<double> nodes = cluster_nodes(rs);
  // smallest relative gap between distinct neighbours decides the precision
  double min_gap = 1.0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] != nodes[i - 1])
      min_gap = std::min(min_gap, (nodes[i] - nodes[i - 1]) / std::abs(nodes[i]));
  if (min_gap < 1e-3)
    return static_cast<double>(confluent_dd<Wide>(alpha, n_anti, nodes));
  return confluent_dd<double>(alpha, n_anti, nodes);
}

void check_nodes(const std::vector<double>& rs) {
  for (double r : rs)
    if (!(r > 0)) throw std::domain_error("spectral: nodes must be positive");
}

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature.
// ---------------------------------------------------------------------------

double asimp(const std::function<double(double)>& f, double a, double m, double b, double fa,
             double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return asimp(f, a, lm, m, fa, flm, fm, left, tol / 2, depth - 1) +
         asimp(f, m, rm, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return asimp(f, a, m, b, fa, fm, fb, whole, tol, 28);
}

} // namespace

double eval_I(double alpha, int k, const std::vector<double>& rs) {
  if (static_cast<int>(rs.size()) != k + 1)
    throw std::invalid_argument("eval_I: expected k+1 nodes");
  check_nodes(rs);
  return power_dd(alpha, k, rs);
}

double eval_I_quadrature(double alpha, int k, const std::vector<double>& rs, double tol) {
  if (static_cast<int>(rs.size()) != k + 1)
    throw std::invalid_argument("eval_I_quadrature: expected k+1 nodes");
  check_nodes(rs);
  if (k == 0) return std::pow(rs[0], -alpha);
  // s_0 = 1 >= s_1 >= ... >= s_k >= 0 = s_{k+1};
  // integrand [sum_l (s_l - s_{l+1}) r_l]^{-alpha}
  std::vector<double> s(static_cast<std::size_t>(k) + 2, 0.0);
  s[0] = 1.0;
  std::function<double(int, double)> level = [&](int l, double lt) -> double {
    std::function<double(double)> f = [&, l](double sl) -> double {
      s[static_cast<std::size_t>(l)] = sl;
      if (l == k) {
        double v = 0;
        for (int j = 0; j <= k; ++j)
          v += (s[static_cast<std::size_t>(j)] - s[static_cast<std::size_t>(j) + 1]) * rs[static_cast<std::size_t>(j)];
        return std::pow(v, -alpha);
      }
      return level(l + 1, lt * 0.5);
    };
    return adaptive_simpson(f, 0.0, s[static_cast<std::size_t>(l) - 1], lt);
  };
  return level(1, tol);
}

double delta_I(double alpha, int k, int l, const std::vector<double>& rs) {
  if (static_cast<int>(rs.size()) != k + 2)
    throw std::invalid_argument("delta_I: expected k+2 nodes");
  if (l < 0 || l > k) throw std::invalid_argument("delta_I: slot out of range");
  check_nodes(rs);
  const std::size_t ul = static_cast<std::size_t>(l);
  const double gap = std::abs(rs[ul + 1] - rs[ul]);
  if (gap > kCoincidenceTol * std::abs(rs[ul])) {
    std::vector<double> no_l = rs, no_l1 = rs;
    no_l.erase(no_l.begin() + static_cast<std::ptrdiff_t>(ul));
    no_l1.erase(no_l1.begin() + static_cast<std::ptrdiff_t>(ul) + 1);
    return (eval_I(alpha, k, no_l) - eval_I(alpha, k, no_l1)) / (rs[ul + 1] - rs[ul]);
  }
  // partial derivative in the l-th variable at the merged tuple: a divided
  // difference of order k+1 with the node r_l doubled, still over the k-th
  // antiderivative of r^{-alpha}
  std::vector<double> nodes = rs;
  nodes[ul + 1] = nodes[ul];
  return power_dd(alpha, k, nodes);
}

SpectralDecomposition spectral_decompose(const Eigen::MatrixXd& u) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u);
  if (es.info() != Eigen::Success) throw std::domain_error("spectral: eigensolver failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0)) throw std::domain_error("spectral: u is not positive definite");
  SpectralDecomposition out;
  const Eigen::Index n = ev.size();
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    double sum = ev[i];
    while (j < n && ev[j] - ev[j - 1] <= kCoincidenceTol * std::abs(ev[j])) {
      sum += ev[j];
      ++j;
    }
    out.values.push_back(sum / static_cast<double>(j - i));
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(u.rows(), u.cols());
    for (Eigen::Index m = i; m < j; ++m)
      proj += es.eigenvectors().col(m) * es.eigenvectors().col(m).transpose();
    out.projs.push_back(std::move(proj));
    i = j;
  }
  return out;
}

Eigen::MatrixXd eval_pi(const std::function<double(const std::vector<double>&)>& f, int k,
                        const Eigen::MatrixXd& u, const std::vector<Eigen::MatrixXd>& args) {
  if (static_cast<int>(args.size()) != k) throw std::invalid_argument("eval_pi: need k arguments");
  const SpectralDecomposition sd = spectral_decompose(u);
  const std::size_t m = sd.values.size();
  const std::size_t slots = static_cast<std::size_t>(k) + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(u.rows(), u.cols());
  std::vector<std::size_t> idx(slots, 0);
  std::vector<double> rs(slots, 0.0);
  for (;;) {
    for (std::size_t j = 0; j < slots; ++j) rs[j] = sd.values[idx[j]];
    Eigen::MatrixXd prod = sd.projs[idx[0]];
    for (int j = 0; j < k; ++j) prod = prod * args[static_cast<std::size_t>(j)] * sd.projs[idx[static_cast<std::size_t>(j) + 1]];
    out += f(rs) * prod;
    std::size_t c = 0;
    while (c < slots && ++idx[c] == m) idx[c++] = 0;
    if (c == slots) break;
  }
  return out;
}

Eigen::MatrixXd eval_X(double alpha, int k, const Eigen::MatrixXd& u,
                       const std::vector<Eigen::MatrixXd>& args) {
  return eval_pi([alpha, k](const std::vector<double>& rs) { return eval_I(alpha, k, rs); }, k, u,
                 args);
}

Eigen::MatrixXd matrix_function(const Eigen::MatrixXd& u,
                                const std::function<double(double)>& f) {
  const SpectralDecomposition sd = spectral_decompose(u);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(u.rows(), u.cols());
  for (std::size_t i = 0; i < sd.values.size(); ++i) out += f(sd.values[i]) * sd.projs[i];
  return out;
}

namespace {

// Gauss-Hermite nodes/weights (weight e^{-x^2}) via the Jacobi matrix.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  const double spi = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = spi * v0 * v0;
  }
}

} // namespace

std::vector<double> gaussian_moment_oracle(int d, int p, const Eigen::MatrixXd& metric) {
  if (d < 1 || d > 4 || p < 0 || p > 3)
    throw std::invalid_argument("gaussian_moment_oracle: d <= 4 and p <= 3");
  if (p == 0) return {1.0};
  // xi = L eta with g = L L^T turns the weight e^{-g^{ab} xi_a xi_b} into
  // e^{-|eta|^2}; the normalization divides out the weight's own integral.
  const Eigen::LLT<Eigen::MatrixXd> llt(metric);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("gaussian_moment_oracle: metric not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  std::vector<double> gx, gw;
  gauss_hermite(10, gx, gw); // exact for polynomial degree <= 19
  const std::size_t nidx = static_cast<std::size_t>(std::pow(d, 2 * p) + 0.5);
  std::vector<double> out(nidx, 0.0);
  std::vector<int> node(static_cast<std::size_t>(d), 0);
  const double norm = std::pow(M_PI, -0.5 * d);
  for (;;) {
    Eigen::VectorXd eta(d);
    double w = norm;
    for (int i = 0; i < d; ++i) {
      eta[i] = gx[static_cast<std::size_t>(node[static_cast<std::size_t>(i)])];
      w *= gw[static_cast<std::size_t>(node[static_cast<std::size_t>(i)])];
    }
    const Eigen::VectorXd xi = L * eta;
    // accumulate every component product xi_{mu_1} ... xi_{mu_2p}
    std::vector<int> mu(static_cast<std::size_t>(2 * p), 0);
    for (std::size_t flat = 0; flat < nidx; ++flat) {
      double v = w;
      std::size_t rem = flat;
      for (int j = 2 * p - 1; j >= 0; --j) {
        v *= xi[static_cast<Eigen::Index>(rem % static_cast<std::size_t>(d))];
        rem /= static_cast<std::size_t>(d);
      }
      out[flat] += v;
    }
    std::size_t c = 0;
    while (c < static_cast<std::size_t>(d) && ++node[c] == 10) node[c++] = 0;
    if (c == static_cast<std::size_t>(d)) break;
  }
  return out;
}

DerivationCheckReport function_calculus_derivation_check(const Eigen::MatrixXd& u0,
                                                         const Eigen::MatrixXd& h, bool use_exp,
                                                         double param) {
  const auto f = [use_exp, param](double r) {
    return use_exp ? std::exp(-param * r) : std::pow(r, -param);
  };
  const auto fp = [use_exp, param](double r) {
    return use_exp ? -param * std::exp(-param * r) : -param * std::pow(r, -param - 1);
  };
  const SpectralDecomposition sd = spectral_decompose(u0);
  Eigen::MatrixXd analytic = Eigen::MatrixXd::Zero(u0.rows(), u0.cols());
  for (std::size_t i = 0; i < sd.values.size(); ++i)
    for (std::size_t j = 0; j < sd.values.size(); ++j) {
      const double ri = sd.values[i], rj = sd.values[j];
      const double dd = (i == j) ? fp(ri) : (f(ri) - f(rj)) / (ri - rj);
      analytic += dd * sd.projs[i] * h * sd.projs[j];
    }
  const double eps = 1e-5;
  const Eigen::MatrixXd fd =
      (matrix_function(u0 + eps * h, f) - matrix_function(u0 - eps * h, f)) / (2 * eps);
  DerivationCheckReport rep;
  rep.max_abs_err = (analytic - fd).cwiseAbs().maxCoeff();
  rep.pass = rep.max_abs_err < 1e-6 * std::max(1.0, analytic.cwiseAbs().maxCoeff());
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized property suite.
// ---------------------------------------------------------------------------

namespace {

struct Check {
  std::string identity;
  std::uint64_t seed;
  double max_abs_err = 0;

  void see(double err) { max_abs_err = std::max(max_abs_err, err); }
  bool pass(double tol) const { return max_abs_err < tol; }
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd random_spd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  return a * a.transpose() + 0.2 * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_mat(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  return a;
}

std::vector<double> random_nodes(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> d(0.1, 10.0);
  std::vector<double> rs(static_cast<std::size_t>(count));
  for (auto& r : rs) r = d(rng);
  return rs;
}

} // namespace

SuiteResult run_spectral_property_suite(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ualpha(0.5, 6.0);
  std::uniform_real_distribution<double> ualpha_ne1(1.5, 6.0);
  std::uniform_int_distribution<int> uk(1, 3);
  std::uniform_int_distribution<int> udim(2, 3);
  std::vector<std::pair<Check, double>> checks; // check, tolerance

  { // Node-duplication sum: I_{a,k}(r) = sum_l r_l I_{a+1,k+1}(.., r_l, r_l, ..)
    Check c{"I-node-duplication-sum", seed};
    for (int t = 0; t < trials; ++t) {
      const int k = uk(rng) - 1; // 0..2
      const double alpha = ualpha(rng);
      const auto rs = random_nodes(rng, k + 1);
      double rhs = 0;
      for (int l = 0; l <= k; ++l) {
        std::vector<double> dup = rs;
        dup.insert(dup.begin() + l, rs[static_cast<std::size_t>(l)]);
        rhs += rs[static_cast<std::size_t>(l)] * eval_I(alpha + 1, k + 1, dup);
      }
      c.see(rel_err(eval_I(alpha, k, rs), rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Slot recursion: I_{a,k} in terms of two I_{a-1,k-1} with a node omitted
    Check c{"I-slot-recursion", seed};
    for (int t = 0; t < trials; ++t) {
      const int k = uk(rng);
      const double alpha = ualpha_ne1(rng);
      const auto rs = random_nodes(rng, k + 1);
      std::uniform_int_distribution<int> ul(1, k);
      const int l = ul(rng);
      std::vector<double> no_lm1 = rs, no_l = rs;
      no_lm1.erase(no_lm1.begin() + (l - 1));
      no_l.erase(no_l.begin() + l);
      const double denom = rs[static_cast<std::size_t>(l)] - rs[static_cast<std::size_t>(l) - 1];
      if (std::abs(denom) < 1e-3) continue;
      const double rhs = (eval_I(alpha - 1, k - 1, no_lm1) - eval_I(alpha - 1, k - 1, no_l)) /
                         ((1 - alpha) * denom);
      c.see(rel_err(eval_I(alpha, k, rs), rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Partial finite differences: Delta^(l) I_{a,k} = -a I_{a+1,k+1}
    Check c{"I-partial-difference", seed};
    for (int t = 0; t < trials; ++t) {
      const int k = uk(rng) - 1;
      const double alpha = ualpha(rng);
      auto rs = random_nodes(rng, k + 2);
      std::uniform_int_distribution<int> ul(0, k);
      const int l = ul(rng);
      if (t % 2 == 0) rs[static_cast<std::size_t>(l) + 1] = rs[static_cast<std::size_t>(l)];
      c.see(rel_err(delta_I(alpha, k, l, rs), -alpha * eval_I(alpha + 1, k + 1, rs)));
    }
    checks.push_back({c, 1e-9});
  }

  { // Coincidence values and continuity across the coincidence boundary
    Check c{"I-coincidence-continuity", seed};
    for (int t = 0; t < trials; ++t) {
      const int k = uk(rng);
      const double alpha = ualpha(rng);
      std::uniform_real_distribution<double> ur(0.1, 10.0);
      const double r = ur(rng);
      std::vector<double> eq(static_cast<std::size_t>(k) + 1, r);
      c.see(rel_err(eval_I(alpha, k, eq), std::pow(r, -alpha) / factorial(k)));
      std::vector<double> near = eq;
      near[0] = r * (1 + 1e-6);
      c.see(rel_err(eval_I(alpha, k, near), eval_I(alpha, k, eq)));
    }
    checks.push_back({c, 1e-4});
  }

  { // Quadrature oracle cross-check, including the integer-alpha log branches
    Check c{"I-quadrature-oracle", seed};
    const int samples = std::min(500, trials * 3);
    for (int t = 0; t < samples; ++t) {
      const int k = uk(rng);
      double alpha = ualpha(rng);
      if (t % 4 == 0) alpha = static_cast<double>(1 + t % 3); // 1, 2, 3
      const auto rs = random_nodes(rng, k + 1);
      c.see(rel_err(eval_I(alpha, k, rs), eval_I_quadrature(alpha, k, rs, 1e-10)));
    }
    checks.push_back({c, 1e-7});
  }

  { // Expansion: X_{a,k} = sum of the k+1 insertions of u at level k+1
    Check c{"X-expansion", seed};
    for (int t = 0; t < std::min(60, trials); ++t) {
      const int n = udim(rng);
      const int k = uk(rng);
      const double alpha = ualpha(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      std::vector<Eigen::MatrixXd> args;
      for (int j = 0; j < k; ++j) args.push_back(random_mat(rng, n));
      const Eigen::MatrixXd lhs = eval_X(alpha, k, u, args);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
      for (int pos = 0; pos <= k; ++pos) {
        std::vector<Eigen::MatrixXd> ins = args;
        ins.insert(ins.begin() + pos, u);
        rhs += eval_X(alpha + 1, k + 1, u, ins);
      }
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Iterated insertions: X_{a,1}[b] = n! sum over u^l1 (x) b (x) u^l2
    Check c{"X-iterated-insertion", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const int m = uk(rng); // insertion count 1..3
      const double alpha = ualpha(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd b = random_mat(rng, n);
      const Eigen::MatrixXd lhs = eval_X(alpha, 1, u, {b});
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, n);
      for (int l1 = 0; l1 <= m; ++l1) {
        std::vector<Eigen::MatrixXd> args;
        for (int j = 0; j < l1; ++j) args.push_back(u);
        args.push_back(b);
        for (int j = 0; j < m - l1; ++j) args.push_back(u);
        rhs += eval_X(alpha + m, m + 1, u, args);
      }
      c.see(rel_err(lhs, factorial(m) * rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Tail commutator: X_{a,k}[.. (x) [b,u]] as two level k-1 operators
    Check c{"X-commutator-tail", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const double alpha = ualpha_ne1(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd b1 = random_mat(rng, n), b2 = random_mat(rng, n);
      const Eigen::MatrixXd lhs = eval_X(alpha, 2, u, {b1, b2 * u - u * b2});
      const Eigen::MatrixXd rhs =
          (eval_X(alpha - 1, 1, u, {b1 * b2}) - eval_X(alpha - 1, 1, u, {b1}) * b2) / (1 - alpha);
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Interior commutator at k = 3, l = 2
    Check c{"X-commutator-interior", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const double alpha = ualpha_ne1(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd b1 = random_mat(rng, n), b2 = random_mat(rng, n),
                            b3 = random_mat(rng, n);
      const Eigen::MatrixXd lhs = eval_X(alpha, 3, u, {b1, b2 * u - u * b2, b3});
      const Eigen::MatrixXd rhs =
          (eval_X(alpha - 1, 2, u, {b1 * b2, b3}) - eval_X(alpha - 1, 2, u, {b1, b2 * b3})) /
          (1 - alpha);
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // First-slot commutator: X_{a,1}[[b,u]] = [b, u^{1-a}]/(1-a)
    Check c{"X-commutator-power", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const double alpha = ualpha_ne1(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd b = random_mat(rng, n);
      const Eigen::MatrixXd lhs = eval_X(alpha, 1, u, {b * u - u * b});
      const Eigen::MatrixXd up =
          matrix_function(u, [alpha](double r) { return std::pow(r, 1 - alpha); });
      const Eigen::MatrixXd rhs = (b * up - up * b) / (1 - alpha);
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Slot collapse: a slot holding F(u) folds into the spectral function
    Check c{"X-slot-collapse", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const double alpha = ualpha(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd a = random_mat(rng, n);
      const Eigen::MatrixXd fu = matrix_function(u, [](double r) { return r * r; });
      const Eigen::MatrixXd lhs = eval_X(alpha, 2, u, {fu, a});
      // the F(u) slot at position 1 collapses: F(r_0) f(r_0, r_0, r_1)
      const Eigen::MatrixXd rhs = eval_pi(
          [alpha](const std::vector<double>& rs) {
            return rs[0] * rs[0] * eval_I(alpha, 2, {rs[0], rs[0], rs[1]});
          },
          1, u, {a});
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Pure-u arguments: X_{a,k}[u (x) ... (x) u] = u^{k-a}/k!
    Check c{"X-pure-u", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const int k = uk(rng);
      const double alpha = ualpha(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd lhs = eval_X(alpha, k, u, std::vector<Eigen::MatrixXd>(k, u));
      const Eigen::MatrixXd rhs =
          matrix_function(u, [&](double r) { return std::pow(r, k - alpha); }) / factorial(k);
      c.see(rel_err(lhs, rhs));
    }
    checks.push_back({c, 1e-10});
  }

  { // Identity u: X collapses to the plain product / k!
    Check c{"X-identity-u", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const int k = uk(rng);
      const double alpha = ualpha(rng);
      std::vector<Eigen::MatrixXd> args;
      Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(n, n);
      for (int j = 0; j < k; ++j) {
        args.push_back(random_mat(rng, n));
        prod = prod * args.back();
      }
      c.see(rel_err(eval_X(alpha, k, Eigen::MatrixXd::Identity(n, n), args),
                    prod / factorial(k)));
    }
    checks.push_back({c, 1e-10});
  }

  { // Gaussian moment oracle: order-2 moment is g/2 and its trace is d/2
    Check c{"gaussian-moment", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      std::uniform_int_distribution<int> ud(1, 4);
      const int d = ud(rng);
      const Eigen::MatrixXd g = random_spd(rng, d);
      const auto m1 = gaussian_moment_oracle(d, 1, g);
      double trace = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          c.see(std::abs(m1[static_cast<std::size_t>(i * d + j)] - 0.5 * g(i, j)));
          trace += g.inverse()(i, j) * m1[static_cast<std::size_t>(i * d + j)];
        }
      c.see(std::abs(trace - 0.5 * d));
    }
    checks.push_back({c, 1e-10});
  }

  { // Derivation formula for the function calculus
    Check c{"function-calculus-derivation", seed};
    for (int t = 0; t < std::min(40, trials); ++t) {
      const int n = udim(rng);
      const Eigen::MatrixXd u = random_spd(rng, n);
      const Eigen::MatrixXd g = random_mat(rng, n);
      const Eigen::MatrixXd h = 0.5 * (g + g.transpose());
      const auto rep =
          function_calculus_derivation_check(u, h, t % 2 == 0, t % 2 == 0 ? 0.7 : 2.0);
      c.see(rep.pass ? rep.max_abs_err * 0 : 1.0);
    }
    checks.push_back({c, 0.5});
  }

  SuiteResult res;
  res.all_pass = true;
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& [c, tol] = checks[i];
    const bool pass = c.pass(tol);
    res.all_pass = res.all_pass && pass;
    if (i) os << ",";
    os << "\n  {\"identity\": \"" << c.identity << "\", \"seed\": " << c.seed
       << ", \"max_abs_err\": " << c.max_abs_err << ", \"pass\": " << (pass ? "true" : "false")
       << "}";
  }
  os << "\n]\n";
  res.json = os.str();
  return res;
}

} // namespace heatcas
