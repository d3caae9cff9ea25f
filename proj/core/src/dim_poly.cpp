#include "heatcas/dim_poly.hpp"

#include <sstream>

namespace heatcas {

DimPoly DimPoly::monomial(const Rational& c, int power) {
  DimPoly p;
  if (c != 0) p.c_[power] = c;
  return p;
}

DimPoly DimPoly::d() { return monomial(1, 1); }

bool DimPoly::is_constant() const {
  return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0);
}

Rational DimPoly::coeff(int power) const {
  auto it = c_.find(power);
  return it == c_.end() ? Rational(0) : it->second;
}

void DimPoly::trim() {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->second == 0)
      it = c_.erase(it);
    else
      ++it;
  }
}

DimPoly& DimPoly::operator+=(const DimPoly& o) {
  for (const auto& [p, c] : o.c_) c_[p] += c;
  trim();
  return *this;
}

DimPoly& DimPoly::operator-=(const DimPoly& o) {
  for (const auto& [p, c] : o.c_) c_[p] -= c;
  trim();
  return *this;
}

DimPoly DimPoly::operator+(const DimPoly& o) const {
  DimPoly r = *this;
  r += o;
  return r;
}

DimPoly DimPoly::operator-(const DimPoly& o) const {
  DimPoly r = *this;
  r -= o;
  return r;
}

DimPoly DimPoly::operator-() const {
  DimPoly r;
  for (const auto& [p, c] : c_) r.c_[p] = -c;
  return r;
}

DimPoly DimPoly::operator*(const DimPoly& o) const {
  DimPoly r;
  for (const auto& [p1, c1] : c_)
    for (const auto& [p2, c2] : o.c_) r.c_[p1 + p2] += c1 * c2;
  r.trim();
  return r;
}

DimPoly& DimPoly::operator*=(const DimPoly& o) { return *this = *this * o; }

DimPoly& DimPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& [p, c] : c_) c *= s;
  return *this;
}

DimPoly DimPoly::operator*(const Rational& s) const {
  DimPoly r = *this;
  r *= s;
  return r;
}

DimPoly& DimPoly::operator/=(const Rational& s) {
  for (auto& [p, c] : c_) c /= s;
  return *this;
}

Rational DimPoly::eval(const Rational& d) const {
  Rational acc = 0, dp = 1;
  int last = 0;
  for (const auto& [p, c] : c_) {
    for (; last < p; ++last) dp *= d;
    acc += c * dp;
  }
  return acc;
}

double DimPoly::eval(double d) const {
  double acc = 0;
  for (const auto& [p, c] : c_) acc += to_double(c) * std::pow(d, p);
  return acc;
}

std::string DimPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    Rational c = it->second;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    const int p = it->first;
    if (p == 0 || c != 1) {
      os << c.str();
      if (p != 0) os << "*";
    }
    if (p == 1)
      os << "d";
    else if (p > 1)
      os << "d^" << p;
    first = false;
  }
  return os.str();
}

} // namespace heatcas
