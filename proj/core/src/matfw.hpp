// Firewall for Eigen operator lookup inside translation units that also see
// the symbolic-layer operator overloads (Rational / DimPoly).  An unqualified
// `a * b` on matrices in such a TU makes overload resolution probe the
// MatrixXd -> Rational conversion, which instantiates a non-SFINAE-safe
// boost::multiprecision trait and fails to compile.  Inside this namespace a
// deleted operator stops ordinary lookup before it reaches those overloads,
// so only Eigen's own member/ADL operators are considered.
#pragma once

#include <Eigen/Dense>

namespace heatcas::matfw {

struct Block {};
void operator*(Block, Block) = delete;

inline Eigen::MatrixXd mul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a * b;
}

inline Eigen::MatrixXd scale(double s, const Eigen::MatrixXd& a) { return s * a; }

// a |-> s * a * a^T (used to build positive semidefinite samples)
inline Eigen::MatrixXd gram(double s, const Eigen::MatrixXd& a) {
  return s * (a * a.transpose());
}

} // namespace heatcas::matfw
