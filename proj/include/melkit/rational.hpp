#ifndef MELKIT_RATIONAL_HPP
#define MELKIT_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace melkit {

using Integer = mpz_class;
using Rational = mpq_class;

/** n! for n >= 0. */
Integer factorial(long n);

/** Double factorial n!! = n(n-2)...(2 or 1) for n >= -1.
 *  (-1)!! = 0!! = 1 (empty product), so (2i-1)!! is defined at i = 0.
 *  Throws std::invalid_argument for n < -1. */
Integer double_factorial(long n);

Integer binomial(long n, long k);

/** 2^e as an exact integer, e >= 0. */
Integer pow2(long e);

/** Parses "p/q" or "p" (base 10). Throws std::invalid_argument on bad
 *  syntax or zero denominator. The result is canonicalized with a
 *  positive denominator. */
Rational rational_from_string(const std::string& text);

/** Exact conversion: every finite double is a dyadic rational. */
Rational rational_from_double(double value);

/** Canonicalized p/q. The raw two-argument mpq_class constructor keeps
 *  the fraction as given, which breaks GMP comparisons; use this for
 *  arbitrary numerator/denominator pairs. */
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace melkit

#endif
