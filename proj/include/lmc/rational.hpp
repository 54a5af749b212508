#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace lmc {

// Exact arbitrary-precision rational scalar. cpp_rational keeps the canonical
// form (numerator/denominator coprime, denominator positive) after every
// operation, which is what the serialization below relies on.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical text form: "p/q" with q > 1, plain "p" when the value is integral.
std::string rational_to_string(const Rational& r);

// Parses "p", "-p", "p/q". Rejects empty strings, q == 0, extra characters.
std::optional<Rational> rational_from_string(const std::string& s);

inline Rational rat(long long num, long long den = 1) {
  return Rational(Integer(num), Integer(den));
}

// n! as an exact integer; used for the 1/m! coefficients of curvature sums.
Integer factorial(int n);

inline Rational inv_factorial(int n) { return Rational(Integer(1), factorial(n)); }

}  // namespace lmc
