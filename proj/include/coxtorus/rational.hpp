#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "coxtorus/error.hpp"

namespace coxtorus {

using Integer = mpz_class;
using Rational = mpq_class;  // mpq_class keeps itself canonical after every operation

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw MathError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Accepts "-3", "7/12", "+2".
inline Rational parse_rational(std::string_view s) {
  std::string t(s);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty()) throw DataError("empty rational literal");
  for (char c : t)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
      throw DataError("bad rational literal '" + std::string(s) + "'");
  Rational q;
  if (q.set_str(t, 10) != 0) throw DataError("bad rational literal '" + std::string(s) + "'");
  if (q.get_den() == 0) throw DataError("zero denominator in '" + std::string(s) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace coxtorus
