#pragma once

#include <gmpxx.h>

#include <string>

namespace semi {

/// Exact coefficients. mpq_class keeps every value in lowest terms once
/// canonicalize() has run; all library entry points return canonical values.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Renders `p` or `p/q` (q > 1), sign on the numerator.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline int sign(const Rational& r) { return sgn(r); }

}  // namespace semi
