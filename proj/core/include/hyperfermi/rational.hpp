#pragma once

// Exact arithmetic helpers on top of GMP.

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace hyperfermi {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p", "-0.125" or "1e-3" into an exact rational.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string to_string(const Rational& value);

/// Nearest double when numerator and denominator are exact in binary64,
/// otherwise GMP's truncating conversion.
double to_double(const Rational& value);

/// Copy in lowest terms; GMP arithmetic assumes canonical operands.
inline Rational canonical(Rational value) {
  value.canonicalize();
  return value;
}

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

/// Generalised binomial coefficient binom(a, k) = a (a-1) ... (a-k+1) / k!.
Rational generalized_binomial(const Rational& a, unsigned k);

/// Taylor coefficients of (1 + x)^a up to and including x^order.
std::vector<Rational> binomial_series(const Rational& a, unsigned order);

Rational pow(const Rational& base, unsigned exponent);

inline Rational abs(const Rational& value) { return ::abs(value); }

/// Exact rational lower bound on e^x for x >= 0 (Taylor partial sum with
/// `terms` terms; every omitted term is nonnegative).
Rational exp_lower_bound(const Rational& x, unsigned terms = 12);

/// Exact rational upper bound on e^x for 0 <= x < 1 using the geometric
/// majorant of the Taylor tail.
Rational exp_upper_bound(const Rational& x, unsigned terms = 12);

}  // namespace hyperfermi
