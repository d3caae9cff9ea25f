// Exact rational arithmetic used throughout the symbolic layer.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace heatcas {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(long num, long den = 1) { return Rational(num, den); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

} // namespace heatcas
