#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ekac {

// Exact arbitrary-precision rational, canonical (reduced, positive denominator)
// after every arithmetic operation.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  mpz_class n, d;
  mpz_set_si(n.get_mpz_t(), num);
  mpz_set_si(d.get_mpz_t(), den);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Rational make_rational_u(std::uint64_t num, std::uint64_t den = 1) {
  mpz_class n, d;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(num), 0, 0, &num);
  mpz_import(d.get_mpz_t(), 1, 1, sizeof(den), 0, 0, &den);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double v) { return Rational(v); }

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// r^e for e >= 0.
inline Rational pow(const Rational& r, unsigned e) {
  Rational out(1);
  Rational base = r;
  while (e != 0) {
    if (e & 1u) out *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return out;
}

}  // namespace ekac
