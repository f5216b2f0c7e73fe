#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace td {

// Exact arbitrary-precision rational, the default scalar backend.
// mpq_class keeps values in canonical reduced form as long as they are
// produced through arithmetic; values built from raw parts are
// canonicalized on construction.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p", or "p/q". Throws std::invalid_argument on bad input.
Rational parse_rational(const std::string& text);

// Reduced "p" or "p/q" form.
std::string to_string(const Rational& q);

// Shortest round-trip decimal for the float backend.
std::string to_string_f64(double x);

// Scalar-backend traits used by the templated evaluation core.
template <class S>
struct Field;

template <>
struct Field<Rational> {
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static std::string str(const Rational& v) { return to_string(v); }
};

template <>
struct Field<double> {
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static bool is_zero(double v) { return v == 0.0; }
  static std::string str(double v) { return to_string_f64(v); }
};

}  // namespace td
