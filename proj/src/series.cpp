#include "melkit/series.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace melkit {

namespace {
constexpr int kInfinity = std::numeric_limits<int>::max() / 2;
const ExactCoeff kZeroCoeff{};
}  // namespace

HalfPowerSeries HalfPowerSeries::zero() {
  HalfPowerSeries s(0, {});
  s.exact_zero_ = true;
  return s;
}

HalfPowerSeries::HalfPowerSeries(int base_half, std::vector<ExactCoeff> coeffs)
    : base_(base_half), coeffs_(std::move(coeffs)) {}

int HalfPowerSeries::base_half_exponent() const {
  return exact_zero_ ? 0 : base_;
}

int HalfPowerSeries::known_through() const {
  if (exact_zero_) return kInfinity;
  return base_ + static_cast<int>(coeffs_.size()) - 1;
}

const ExactCoeff& HalfPowerSeries::at_half(int half_exp) const {
  if (exact_zero_) return kZeroCoeff;
  if (half_exp > known_through())
    throw std::out_of_range("HalfPowerSeries::at_half: beyond truncation window");
  if (half_exp < base_) return kZeroCoeff;
  return coeffs_[static_cast<size_t>(half_exp - base_)];
}

bool HalfPowerSeries::leading_term(int& half_exp, ExactCoeff& coeff) const {
  if (exact_zero_) return false;
  for (size_t k = 0; k < coeffs_.size(); ++k) {
    if (!coeffs_[k].is_zero()) {
      half_exp = base_ + static_cast<int>(k);
      coeff = coeffs_[k];
      return true;
    }
  }
  return false;
}

HalfPowerSeries& HalfPowerSeries::operator+=(const HalfPowerSeries& o) {
  if (o.exact_zero_) return *this;
  if (exact_zero_) {
    *this = o;
    return *this;
  }
  const int high = std::min(known_through(), o.known_through());
  const int base = std::min(base_, o.base_);
  std::vector<ExactCoeff> sum;
  if (high >= base) {
    sum.resize(static_cast<size_t>(high - base + 1));
    for (int he = base; he <= high; ++he)
      sum[static_cast<size_t>(he - base)] = at_half(he) + o.at_half(he);
  }
  base_ = (high >= base) ? base : high + 1;
  coeffs_ = std::move(sum);
  return *this;
}

HalfPowerSeries HalfPowerSeries::scaled(const Rational& s) const {
  if (exact_zero_) return *this;
  // Scaling by zero keeps the finite window; only the exact-zero marker
  // is known to vanish at every order.
  HalfPowerSeries out = *this;
  for (auto& c : out.coeffs_) c *= s;
  return out;
}

bool HalfPowerSeries::vanishes_through(int cap_half) const {
  if (exact_zero_) return true;
  if (known_through() < cap_half)
    throw std::out_of_range("HalfPowerSeries::vanishes_through: window too short");
  for (int he = base_; he <= cap_half; ++he)
    if (!at_half(he).is_zero()) return false;
  return true;
}

double HalfPowerSeries::eval(double h) const {
  if (exact_zero_) return 0.0;
  const double root = std::sqrt(h);
  double acc = 0.0;
  // Horner in sqrt(h), highest term first.
  for (size_t k = coeffs_.size(); k-- > 0;)
    acc = acc * root + coeffs_[k].to_double();
  return acc * std::pow(root, base_);
}

double HalfPowerSeries::eval_precise(const Rational& h) const {
  if (exact_zero_) return 0.0;
  if (h <= 0) throw std::domain_error("HalfPowerSeries::eval_precise: h <= 0");
  const mpfr_prec_t prec = 256;
  mpfr_t acc, root, term, part, pi, rt2;
  mpfr_inits2(prec, acc, root, term, part, pi, rt2, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_sqrt_ui(rt2, 2, MPFR_RNDN);
  mpfr_set_q(root, h.get_mpq_t(), MPFR_RNDN);
  mpfr_sqrt(root, root, MPFR_RNDN);
  mpfr_set_zero(acc, 1);
  for (size_t k = coeffs_.size(); k-- > 0;) {
    mpfr_mul(acc, acc, root, MPFR_RNDN);
    const ExactCoeff& c = coeffs_[k];
    mpfr_set_q(part, c.unit_part.get_mpq_t(), MPFR_RNDN);
    mpfr_add(acc, acc, part, MPFR_RNDN);
    mpfr_set_q(part, c.pi_part.get_mpq_t(), MPFR_RNDN);
    mpfr_fma(acc, part, pi, acc, MPFR_RNDN);
    mpfr_set_q(part, c.rt2_part.get_mpq_t(), MPFR_RNDN);
    mpfr_fma(acc, part, rt2, acc, MPFR_RNDN);
  }
  mpfr_pow_si(term, root, base_, MPFR_RNDN);
  mpfr_mul(acc, acc, term, MPFR_RNDN);
  const double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(acc, root, term, part, pi, rt2, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace melkit
