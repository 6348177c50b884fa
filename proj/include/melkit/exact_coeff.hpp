#ifndef MELKIT_EXACT_COEFF_HPP
#define MELKIT_EXACT_COEFF_HPP

#include <string>
#include <utility>

#include "melkit/rational.hpp"

namespace melkit {

/** Exact value a*pi + b*sqrt(2) + c over the rationals.
 *
 *  pi, sqrt(2) and 1 are linearly independent over Q, so the value is
 *  zero iff all three parts vanish; zero testing stays exact under any
 *  rational-linear combination. */
struct ExactCoeff {
  Rational pi_part;
  Rational rt2_part;
  Rational unit_part;

  ExactCoeff() = default;
  ExactCoeff(Rational pi, Rational rt2, Rational unit)
      : pi_part(std::move(pi)), rt2_part(std::move(rt2)), unit_part(std::move(unit)) {}

  static ExactCoeff pi(Rational a) { return {std::move(a), 0, 0}; }
  static ExactCoeff rt2(Rational b) { return {0, std::move(b), 0}; }
  static ExactCoeff unit(Rational c) { return {0, 0, std::move(c)}; }

  bool is_zero() const {
    return pi_part == 0 && rt2_part == 0 && unit_part == 0;
  }

  ExactCoeff& operator+=(const ExactCoeff& o);
  ExactCoeff& operator-=(const ExactCoeff& o);
  ExactCoeff& operator*=(const Rational& s);
  friend ExactCoeff operator+(ExactCoeff a, const ExactCoeff& b) { return a += b; }
  friend ExactCoeff operator-(ExactCoeff a, const ExactCoeff& b) { return a -= b; }
  friend ExactCoeff operator*(ExactCoeff a, const Rational& s) { return a *= s; }
  friend ExactCoeff operator*(const Rational& s, ExactCoeff a) { return a *= s; }
  friend ExactCoeff operator-(ExactCoeff a) { return a *= Rational(-1); }
  friend bool operator==(const ExactCoeff& a, const ExactCoeff& b) {
    return a.pi_part == b.pi_part && a.rt2_part == b.rt2_part &&
           a.unit_part == b.unit_part;
  }

  /** "p/q*pi + r/s*sqrt2 + t/u" with zero parts omitted; plain "0" when zero. */
  std::string str() const;

  double to_double() const;
};

/** Decimal rendering of a*pi + b*sqrt2 + c, correct to `digits`
 *  significant digits (pi and sqrt2 supplied by MPFR at matching
 *  precision). */
std::string evaluate_decimal(const ExactCoeff& c, int digits);

/** Series prefactors.  All Gamma ratios at half-integers are reduced to
 *  double factorials and factorials; nothing here touches floating point. */

/** 2^{3-k} Gamma(k+1/2) / (k! Gamma(1/2)) = 8 (2k-1)!! / (4^k k!). */
Rational tilde_b(long k);

/** 2^{j-1} Gamma(i+k+1/2) Gamma(j+3/2) / Gamma(i+j+k+2); always a
 *  rational multiple of pi:
 *  (2(i+k)-1)!! (2j+1)!! / (2^{i+k+2} (i+j+k+1)!) * pi. */
ExactCoeff b_coeff(long i, long j, long k);

/** 2^{j-5/2} Gamma(i+k+1/2) Gamma(j+1) / Gamma(i+j+k+3/2) for j >= 1;
 *  always a rational multiple of sqrt2:
 *  2^{2j-2} j! (2(i+k)-1)!! / (2(i+j+k)+1)!! * sqrt2. */
ExactCoeff c_coeff(long i, long j, long k);

/** The elimination-chain pair (c_{i,j}, e_{i,j}):
 *  c_{i,j} = (i+j)! (2i-1)!! / (i! (2i+2j+3)!!),
 *  e_{i,j} = (i+j)! (2i-1)!! / (i! (2i+2j+1)!!). */
std::pair<Rational, Rational> zb_chain_coeffs(long i, long j);

}  // namespace melkit

#endif
