#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace flowfactory {

using BigInt = mpz_class;
// Always canonical (lowest terms, positive denominator) once constructed
// through make_rational or arithmetic.
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  return make_rational(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// "p/q", or just "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline bool fits_int64(const BigInt& z) {
  static const BigInt lo("-9223372036854775808");
  static const BigInt hi("9223372036854775807");
  return z >= lo && z <= hi;
}

inline std::int64_t to_int64(const BigInt& z) { return std::stoll(z.get_str()); }

}  // namespace flowfactory
