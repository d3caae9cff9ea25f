// Polynomials in the manifold dimension d with exact rational coefficients.
//
// Coefficients of the heat invariants are rational polynomials in d produced
// by Gaussian-moment contractions (factors of the form (d + 2p - 2)/2), so we
// keep them exact instead of collapsing to floating point.
#pragma once

#include "heatcas/rational.hpp"

#include <map>
#include <string>

namespace heatcas {

class DimPoly {
public:
  DimPoly() = default;
  explicit DimPoly(const Rational& c) {
    if (c != 0) c_[0] = c;
  }
  DimPoly(long num, long den) { *this = DimPoly(Rational(num, den)); }

  // The monomial c * d^power.
  static DimPoly monomial(const Rational& c, int power);
  // The variable d itself.
  static DimPoly d();

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const;
  int degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }
  Rational coeff(int power) const;

  DimPoly& operator+=(const DimPoly& o);
  DimPoly& operator-=(const DimPoly& o);
  DimPoly operator+(const DimPoly& o) const;
  DimPoly operator-(const DimPoly& o) const;
  DimPoly operator-() const;
  DimPoly operator*(const DimPoly& o) const;
  DimPoly& operator*=(const DimPoly& o);
  DimPoly& operator*=(const Rational& s);
  DimPoly operator*(const Rational& s) const;
  DimPoly& operator/=(const Rational& s);

  bool operator==(const DimPoly& o) const { return c_ == o.c_; }
  bool operator!=(const DimPoly& o) const { return !(*this == o); }

  Rational eval(const Rational& d) const;
  double eval(double d) const;

  // "-1/2*d^2 + 3*d - 4" style rendering (descending powers).
  std::string str() const;

  const std::map<int, Rational>& coeffs() const { return c_; }

private:
  void trim();
  std::map<int, Rational> c_; // power -> coefficient, zero entries removed
};

inline DimPoly operator*(const Rational& s, const DimPoly& p) { return p * s; }

} // namespace heatcas
