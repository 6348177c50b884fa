#ifndef MELKIT_PERTURBATION_HPP
#define MELKIT_PERTURBATION_HPP

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "melkit/rational.hpp"

namespace melkit {

/** Trigonometric polynomial
 *    sum_i a[i] cos^i(x) + sin(x) * sum_i a_tilde[i] cos^i(x)
 *  with exact rational coefficients. a_tilde may be empty. */
struct TrigPoly {
  std::vector<Rational> a;
  std::vector<Rational> a_tilde;

  double eval(double x) const;
  bool is_zero() const;
};

/** Even part of a trig polynomial written over the basis (1-cos x)^i. */
struct CosBasisPoly {
  std::vector<Rational> ctilde;

  double eval(double x) const;
};

/** Drops the sin(x)*(...) part and rewrites sum a_i cos^i(x) as
 *  sum ctilde_i (1-cos x)^i via cos x = 1 - (1-cos x). Exact. */
CosBasisPoly even_part_to_cos_basis(const TrigPoly& q);

/** Inverse change of basis: coefficients of cos^i(x) for
 *  sum ctilde_q (1-cos x)^q. Exact. */
std::vector<Rational> cos_powers_from_w_basis(const std::vector<Rational>& ctilde);

/** Smooth perturbation sum_{s=s1}^{s2} Q_{n,s}(x) y^s with each Q_{n,s}
 *  a trig polynomial of degree at most n. */
struct SmoothPerturbation {
  int n = 0;
  int s1 = 1;
  int s2 = 1;
  std::vector<TrigPoly> q;  // indexed s - s1

  const TrigPoly& at_power(int s) const { return q[static_cast<size_t>(s - s1)]; }
  void validate() const;
  double eval(double x, double y) const;
};

/** Piecewise perturbation: Q^+ on y > 0 (powers s1..s2), Q^- on y < 0
 *  (powers s1..s3). */
struct PiecewisePerturbation {
  int n = 0;
  int s1 = 1;
  int s2 = 1;
  int s3 = 1;
  std::vector<TrigPoly> plus;   // indexed s - s1, up to s2
  std::vector<TrigPoly> minus;  // indexed s - s1, up to s3

  int s_hat() const { return s2 > s3 ? s2 : s3; }
  void validate() const;
  double eval(double x, double y, int side) const;
};

using Perturbation = std::variant<SmoothPerturbation, PiecewisePerturbation>;

/** Q(x, y) on the given side (+1 upper, -1 lower; smooth ignores it). */
double eval_perturbation(const Perturbation& p, double x, double y, int side);

/** Parse a perturbation document:
 *    {"kind":"smooth","n":..,"s1":..,"s2":..,"a":[[..]],"a_tilde":[[..]]}
 *    {"kind":"piecewise","n":..,"s1":..,"s2":..,"s3":..,
 *     "plus":{"a":..,"a_tilde":..},"minus":{..}}
 *  Coefficient tables are i-major: a[i][s-s1], 0 <= i <= n. Entries are
 *  "p/q" strings (plain integers also accepted). An optional
 *  "basis":"one_minus_cos" marks rows as coefficients of (1-cos x)^i,
 *  converted exactly to cos powers on load. Schema violations raise
 *  std::invalid_argument naming the offending field. */
Perturbation perturbation_from_json(const nlohmann::json& doc);
Perturbation load_perturbation(const std::string& path);
nlohmann::json perturbation_to_json(const Perturbation& p);

}  // namespace melkit

#endif
