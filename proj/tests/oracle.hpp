#ifndef MELKIT_TESTS_ORACLE_HPP
#define MELKIT_TESTS_ORACLE_HPP

// Independent high-precision references used only by tests: the
// coefficient formulas are evaluated directly with MPFR Gamma, with no
// double-factorial reduction anywhere on this path.

#include <mpfr.h>

#include "melkit/exact_coeff.hpp"

namespace melkit::testing {

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t v;
};

/** Gamma(halves/2) at the working precision. */
inline void gamma_half(mpfr_t out, long halves) {
  mpfr_set_si(out, halves, MPFR_RNDN);
  mpfr_div_ui(out, out, 2, MPFR_RNDN);
  mpfr_gamma(out, out, MPFR_RNDN);
}

inline double relative_deviation(const mpfr_t reference, const melkit::ExactCoeff& c,
                                 mpfr_prec_t bits) {
  Mpfr val(bits), part(bits), tmp(bits);
  mpfr_set_zero(val.v, 1);
  mpfr_const_pi(tmp.v, MPFR_RNDN);
  mpfr_set_q(part.v, c.pi_part.get_mpq_t(), MPFR_RNDN);
  mpfr_fma(val.v, part.v, tmp.v, val.v, MPFR_RNDN);
  mpfr_sqrt_ui(tmp.v, 2, MPFR_RNDN);
  mpfr_set_q(part.v, c.rt2_part.get_mpq_t(), MPFR_RNDN);
  mpfr_fma(val.v, part.v, tmp.v, val.v, MPFR_RNDN);
  mpfr_set_q(part.v, c.unit_part.get_mpq_t(), MPFR_RNDN);
  mpfr_add(val.v, val.v, part.v, MPFR_RNDN);

  mpfr_sub(val.v, val.v, reference, MPFR_RNDN);
  mpfr_div(val.v, val.v, reference, MPFR_RNDN);
  mpfr_abs(val.v, val.v, MPFR_RNDN);
  return mpfr_get_d(val.v, MPFR_RNDN);
}

/** |b_coeff(i,j,k) - 2^{j-1} G(i+k+1/2) G(j+3/2) / G(i+j+k+2)| /
 *  |reference|, both sides at `bits` working precision. */
inline double b_coeff_gamma_deviation(int i, int j, int k, mpfr_prec_t bits = 384) {
  Mpfr ref(bits), g(bits);
  gamma_half(ref.v, 2L * (i + k) + 1);                 // Gamma(i+k+1/2)
  gamma_half(g.v, 2L * j + 3);                         // Gamma(j+3/2)
  mpfr_mul(ref.v, ref.v, g.v, MPFR_RNDN);
  gamma_half(g.v, 2L * (i + j + k) + 4);               // Gamma(i+j+k+2)
  mpfr_div(ref.v, ref.v, g.v, MPFR_RNDN);
  mpfr_mul_2si(ref.v, ref.v, j - 1, MPFR_RNDN);
  return relative_deviation(ref.v, melkit::b_coeff(i, j, k), bits);
}

/** Same for c_coeff against 2^{j-5/2} G(i+k+1/2) G(j+1) / G(i+j+k+3/2). */
inline double c_coeff_gamma_deviation(int i, int j, int k, mpfr_prec_t bits = 384) {
  Mpfr ref(bits), g(bits);
  gamma_half(ref.v, 2L * (i + k) + 1);
  gamma_half(g.v, 2L * j + 2);                         // Gamma(j+1)
  mpfr_mul(ref.v, ref.v, g.v, MPFR_RNDN);
  gamma_half(g.v, 2L * (i + j + k) + 3);               // Gamma(i+j+k+3/2)
  mpfr_div(ref.v, ref.v, g.v, MPFR_RNDN);
  mpfr_mul_2si(ref.v, ref.v, j - 3, MPFR_RNDN);        // 2^{j-3} * 2^{1/2}
  mpfr_sqrt_ui(g.v, 2, MPFR_RNDN);
  mpfr_mul(ref.v, ref.v, g.v, MPFR_RNDN);
  return relative_deviation(ref.v, melkit::c_coeff(i, j, k), bits);
}

/** tilde_b against 2^{3-k} Gamma(k+1/2) / (k! Gamma(1/2)). */
inline double tilde_b_gamma_deviation(int k, mpfr_prec_t bits = 384) {
  Mpfr ref(bits), g(bits);
  gamma_half(ref.v, 2L * k + 1);
  gamma_half(g.v, 1);
  mpfr_div(ref.v, ref.v, g.v, MPFR_RNDN);
  mpfr_fac_ui(g.v, static_cast<unsigned long>(k), MPFR_RNDN);
  mpfr_div(ref.v, ref.v, g.v, MPFR_RNDN);
  mpfr_mul_2si(ref.v, ref.v, 3 - k, MPFR_RNDN);
  return relative_deviation(ref.v, melkit::ExactCoeff::unit(melkit::tilde_b(k)), bits);
}

}  // namespace melkit::testing

#endif
