#include "melkit/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace melkit {

Integer factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  Integer result;
  mpz_fac_ui(result.get_mpz_t(), static_cast<unsigned long>(n));
  return result;
}

Integer double_factorial(long n) {
  if (n < -1) throw std::invalid_argument("double_factorial: argument below -1");
  if (n <= 0) return 1;
  Integer result;
  mpz_2fac_ui(result.get_mpz_t(), static_cast<unsigned long>(n));
  return result;
}

Integer binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer result;
  mpz_bin_uiui(result.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return result;
}

Integer pow2(long e) {
  if (e < 0) throw std::invalid_argument("pow2: negative exponent");
  Integer result = 1;
  mpz_mul_2exp(result.get_mpz_t(), result.get_mpz_t(),
               static_cast<unsigned long>(e));
  return result;
}

Rational rational_from_string(const std::string& text) {
  Rational q;
  if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0)
    throw std::invalid_argument("rational_from_string: cannot parse '" + text + "'");
  if (mpz_sgn(mpq_denref(q.get_mpq_t())) == 0)
    throw std::invalid_argument("rational_from_string: zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value))
    throw std::invalid_argument("rational_from_double: non-finite value");
  Rational q;
  mpq_set_d(q.get_mpq_t(), value);
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace melkit
