#ifndef MELKIT_SERIES_HPP
#define MELKIT_SERIES_HPP

#include <limits>
#include <vector>

#include "melkit/exact_coeff.hpp"

namespace melkit {

/** Truncated expansion sum_k gamma_k h^{(base+k)/2} with exact
 *  coefficients, tracked together with its knowledge window:
 *  coefficients are exactly zero below base_half_exponent(), known
 *  for all half-exponents up to known_through(), and unknown above.
 *  Addition and rational scaling are exact; adding series with
 *  different windows truncates the result to the smaller one.
 *
 *  The value identically_zero() marks a series known to vanish at
 *  every order (e.g. an empty Melnikov combination), as opposed to a
 *  truncation whose stored coefficients happen to be zero. */
class HalfPowerSeries {
 public:
  /** Known-zero through every order. */
  static HalfPowerSeries zero();

  /** Window [base_half, base_half + coeffs.size() - 1]. */
  HalfPowerSeries(int base_half, std::vector<ExactCoeff> coeffs);

  bool identically_zero() const { return exact_zero_; }
  int base_half_exponent() const;
  int order() const { return static_cast<int>(coeffs_.size()); }
  int known_through() const;

  /** Coefficient of h^{half_exp/2}; zero below the base. Throws if
   *  half_exp lies beyond the knowledge window. */
  const ExactCoeff& at_half(int half_exp) const;

  /** First nonzero term as (half_exp, coeff); false if none within the
   *  window. */
  bool leading_term(int& half_exp, ExactCoeff& coeff) const;

  HalfPowerSeries& operator+=(const HalfPowerSeries& o);
  friend HalfPowerSeries operator+(HalfPowerSeries a, const HalfPowerSeries& b) {
    return a += b;
  }
  friend HalfPowerSeries operator-(const HalfPowerSeries& a, const HalfPowerSeries& b) {
    return a + b.scaled(Rational(-1));
  }
  HalfPowerSeries scaled(const Rational& s) const;

  /** True when every known coefficient with half-exponent <= cap_half
   *  vanishes. Throws if the window does not reach cap_half. */
  bool vanishes_through(int cap_half) const;

  double eval(double h) const;

  /** Evaluation at rational h > 0 with MPFR working precision,
   *  rendered to a double. Immune to cancellation up to ~10^-60. */
  double eval_precise(const Rational& h) const;

 private:
  bool exact_zero_ = false;
  int base_ = 0;
  std::vector<ExactCoeff> coeffs_;
};

}  // namespace melkit

#endif
