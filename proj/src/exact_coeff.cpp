#include "melkit/exact_coeff.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace melkit {

ExactCoeff& ExactCoeff::operator+=(const ExactCoeff& o) {
  pi_part += o.pi_part;
  rt2_part += o.rt2_part;
  unit_part += o.unit_part;
  return *this;
}

ExactCoeff& ExactCoeff::operator-=(const ExactCoeff& o) {
  pi_part -= o.pi_part;
  rt2_part -= o.rt2_part;
  unit_part -= o.unit_part;
  return *this;
}

ExactCoeff& ExactCoeff::operator*=(const Rational& s) {
  pi_part *= s;
  rt2_part *= s;
  unit_part *= s;
  return *this;
}

std::string ExactCoeff::str() const {
  if (is_zero()) return "0";
  std::string out;
  auto append = [&out](const Rational& q, const char* symbol) {
    if (q == 0) return;
    Rational a = q;
    if (!out.empty()) {
      out += (a < 0) ? " - " : " + ";
      if (a < 0) a = -a;
    }
    std::string part = a.get_str();
    if (symbol[0] != '\0') {
      if (part == "1")
        part = symbol;
      else if (part == "-1")
        part = std::string("-") + symbol;
      else
        part += std::string("*") + symbol;
    }
    out += part;
  };
  append(pi_part, "pi");
  append(rt2_part, "sqrt2");
  append(unit_part, "");
  return out;
}

double ExactCoeff::to_double() const {
  return pi_part.get_d() * M_PI + rt2_part.get_d() * M_SQRT2 + unit_part.get_d();
}

std::string evaluate_decimal(const ExactCoeff& c, int digits) {
  if (digits < 1) throw std::invalid_argument("evaluate_decimal: digits < 1");
  const mpfr_prec_t prec = static_cast<mpfr_prec_t>(digits * 4 + 64);
  mpfr_t acc, term, part;
  mpfr_inits2(prec, acc, term, part, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);

  mpfr_const_pi(term, MPFR_RNDN);
  mpfr_set_q(part, c.pi_part.get_mpq_t(), MPFR_RNDN);
  mpfr_fma(acc, term, part, acc, MPFR_RNDN);

  mpfr_sqrt_ui(term, 2, MPFR_RNDN);
  mpfr_set_q(part, c.rt2_part.get_mpq_t(), MPFR_RNDN);
  mpfr_fma(acc, term, part, acc, MPFR_RNDN);

  mpfr_set_q(part, c.unit_part.get_mpq_t(), MPFR_RNDN);
  mpfr_add(acc, acc, part, MPFR_RNDN);

  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, acc);
  mpfr_clears(acc, term, part, static_cast<mpfr_ptr>(nullptr));
  return std::string(buf.data());
}

Rational tilde_b(long k) {
  if (k < 0) throw std::invalid_argument("tilde_b: k < 0");
  Rational v(Integer(8) * double_factorial(2 * k - 1),
             pow2(2 * k) * factorial(k));
  v.canonicalize();
  return v;
}

ExactCoeff b_coeff(long i, long j, long k) {
  if (i < 0 || j < 0 || k < 0) throw std::invalid_argument("b_coeff: negative index");
  Rational v(double_factorial(2 * (i + k) - 1) * double_factorial(2 * j + 1),
             pow2(i + k + 2) * factorial(i + j + k + 1));
  v.canonicalize();
  return ExactCoeff::pi(v);
}

ExactCoeff c_coeff(long i, long j, long k) {
  if (i < 0 || k < 0) throw std::invalid_argument("c_coeff: negative index");
  if (j < 1) throw std::invalid_argument("c_coeff: j < 1");
  Rational v(pow2(2 * j - 2) * factorial(j) * double_factorial(2 * (i + k) - 1),
             double_factorial(2 * (i + j + k) + 1));
  v.canonicalize();
  return ExactCoeff::rt2(v);
}

std::pair<Rational, Rational> zb_chain_coeffs(long i, long j) {
  if (i < 0 || j < 0) throw std::invalid_argument("zb_chain_coeffs: negative index");
  const Integer common = factorial(i + j) * double_factorial(2 * i - 1);
  Rational c(common, factorial(i) * double_factorial(2 * i + 2 * j + 3));
  Rational e(common, factorial(i) * double_factorial(2 * i + 2 * j + 1));
  c.canonicalize();
  e.canonicalize();
  return {c, e};
}

}  // namespace melkit
