#include <doctest.h>

#include "heatcas/spectral.hpp"
#include "heatcas/tensor_ops.hpp"

#include <cmath>

using namespace heatcas;

TEST_CASE("closed-form spot values of the universal functions") {
  CHECK(eval_I(2, 0, {2}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(eval_I(1, 1, {2, 3}) == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(eval_I(3, 2, {2, 2, 2}) == doctest::Approx(1.0 / 16).epsilon(1e-12));
  CHECK(eval_I(2, 2, {1, 2, 3}) ==
        doctest::Approx(std::log(3.0) / 2 - std::log(1.5)).epsilon(1e-12));
  // log-branch coincidence limit
  CHECK(eval_I(1, 1, {5, 5}) == doctest::Approx(0.2).epsilon(1e-12));
  // alpha = 0 integrand is 1, so the value is the simplex volume
  CHECK(eval_I(0, 3, {1, 7, 2, 4}) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(eval_I_quadrature(0, 2, {1, 2, 3}) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("quadrature oracle agrees with the divided-difference evaluator") {
  // includes the integer-alpha values where the monomial formula has poles
  const double alphas[] = {0.5, 1.0, 2.0, 3.0, 4.7};
  const std::vector<std::vector<double>> nodes = {
      {1.0, 2.0}, {0.4, 3.1, 1.7}, {2.0, 2.0, 5.0}, {1.1, 0.9, 2.5, 4.0}};
  for (double a : alphas)
    for (const auto& rs : nodes) {
      const int k = static_cast<int>(rs.size()) - 1;
      CHECK(eval_I(a, k, rs) ==
            doctest::Approx(eval_I_quadrature(a, k, rs, 1e-10)).epsilon(1e-7));
    }
}

TEST_CASE("non-positive nodes and non-positive-definite u are rejected") {
  CHECK_THROWS_AS(eval_I(2, 1, {1.0, -2.0}), std::domain_error);
  CHECK_THROWS_AS(eval_I_quadrature(2, 1, {0.0, 2.0}), std::domain_error);
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 0, 0, -1;
  CHECK_THROWS_AS(eval_X(2, 1, bad, {Eigen::MatrixXd::Identity(2, 2)}), std::domain_error);
}

TEST_CASE("degenerate eigenvalues merge into one spectral projection") {
  Eigen::MatrixXd u(3, 3);
  u << 2, 0, 0, 0, 2, 0, 0, 0, 3;
  const auto sd = spectral_decompose(u);
  REQUIRE(sd.values.size() == 2);
  CHECK(sd.values[0] == doctest::Approx(2.0));
  CHECK(sd.projs[0].trace() == doctest::Approx(2.0));
  // all-u arguments evaluate to u^{k-alpha}/k!
  const Eigen::MatrixXd x = eval_X(2.5, 2, u, {u, u});
  const Eigen::MatrixXd want =
      matrix_function(u, [](double r) { return std::pow(r, -0.5) / 2; });
  CHECK((x - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("order-2 Gaussian moment is half the metric") {
  Eigen::MatrixXd g(3, 3);
  g << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.1;
  const auto m = gaussian_moment_oracle(3, 1, g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(m[static_cast<std::size_t>(i * 3 + j)] ==
            doctest::Approx(0.5 * g(i, j)).epsilon(1e-12));
  CHECK(gaussian_moment_oracle(3, 0, g) == std::vector<double>{1.0});
}

TEST_CASE("order-4 moment certifies the symbolic pairing expansion") {
  const int d = 3;
  Eigen::MatrixXd g(d, d);
  g << 1.4, 0.2, 0.0, 0.2, 2.0, -0.3, 0.0, -0.3, 0.9;
  const auto m = gaussian_moment_oracle(d, 2, g);
  const Expression pairings = build_moment_tensor({dn(0), dn(1), dn(2), dn(3)});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          const int mu[4] = {a, b, c, e};
          double sym = 0;
          for (const auto& t : pairings) {
            double v = static_cast<double>(t.coeff.coeff(0));
            for (const auto& s : t.scalars) {
              REQUIRE(s.sym == ScalarSym::MetricDown);
              v *= g(mu[s.idx[0].id], mu[s.idx[1].id]);
            }
            sym += v;
          }
          const std::size_t flat = static_cast<std::size_t>(((a * d + b) * d + c) * d + e);
          CHECK(m[flat] == doctest::Approx(sym).epsilon(1e-11));
        }
}

TEST_CASE("moment trace reproduces the contraction factor d/2 + p - 1") {
  const int d = 4;
  Eigen::MatrixXd g(d, d);
  g << 1.2, 0.1, 0.0, 0.2, 0.1, 0.8, -0.1, 0.0, 0.0, -0.1, 1.5, 0.3, 0.2, 0.0, 0.3, 1.1;
  const Eigen::MatrixXd ginv = g.inverse();
  // contracting the last pair of the order-4 moment against g^{..} must give
  // (d/2 + 1) times the order-2 moment
  const auto m4 = gaussian_moment_oracle(d, 2, g);
  const auto m2 = gaussian_moment_oracle(d, 1, g);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      double got = 0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          got += ginv(c, e) * m4[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)];
      CHECK(got == doctest::Approx((0.5 * d + 1) * m2[static_cast<std::size_t>(a * d + b)])
                       .epsilon(1e-10));
    }
}

TEST_CASE("derivation check: constant direction gives a zero derivative") {
  Eigen::MatrixXd u(2, 2);
  u << 2, 0.5, 0.5, 3;
  const auto rep = function_calculus_derivation_check(u, Eigen::MatrixXd::Zero(2, 2), false, 2.0);
  CHECK(rep.pass);
  CHECK(rep.max_abs_err == doctest::Approx(0.0));
}

TEST_CASE("randomized identity suite passes and reports JSON records") {
  const auto res = run_spectral_property_suite(12345, 40);
  CHECK(res.all_pass);
  CHECK(res.json.find("\"identity\": \"X-expansion\"") != std::string::npos);
  CHECK(res.json.find("\"seed\": 12345") != std::string::npos);
  CHECK(res.json.find("\"pass\": false") == std::string::npos);
}
