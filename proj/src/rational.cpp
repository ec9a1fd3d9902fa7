#include "steerlab/rational.hpp"

#include "steerlab/error.hpp"

#include <cctype>

namespace steerlab {

Integer rational_floor(const Rational& r) {
  Integer num = numerator(r);
  Integer den = denominator(r);  // den > 0 by cpp_rational invariant
  Integer q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

Integer round_half_up(const Rational& r) {
  return rational_floor(r + Rational(1, 2));
}

std::string to_text(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
  auto fail = [&] {
    throw Error(ErrorKind::SyntaxError, "malformed rational '" + text + "'");
  };
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::size_t digits_start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == digits_start) fail();
  Integer num(text.substr(digits_start, pos - digits_start));
  Integer den = 1;
  if (pos < text.size()) {
    if (text[pos] != '/') fail();
    ++pos;
    std::size_t den_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == den_start || pos != text.size()) fail();
    den = Integer(text.substr(den_start, pos - den_start));
    if (den == 0) fail();
  }
  Rational r(num, den);
  return negative ? Rational(-r) : r;
}

}  // namespace steerlab
