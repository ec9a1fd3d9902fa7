#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace steerlab {

// All weights and probabilities in the library are exact rationals.
// Equivalence checking and the semiring law suite compare values for
// literal equality, so floating point is banned throughout.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Largest integer n with n <= r.
Integer rational_floor(const Rational& r);

/// Nearest integer to r, ties rounded toward +infinity.
Integer round_half_up(const Rational& r);

/// Canonical text form: "p/q", or just "p" when q == 1.
std::string to_text(const Rational& r);

/// Parses "p/q" or "p" (optional leading '-'). Throws Error(SyntaxError)
/// on malformed input or zero denominator.
Rational parse_rational(const std::string& text);

}  // namespace steerlab
