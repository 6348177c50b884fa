#ifndef MELKIT_ZEROS_HPP
#define MELKIT_ZEROS_HPP

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

#include "melkit/melnikov.hpp"
#include "melkit/quadrature.hpp"

namespace melkit {

struct BoundQuery {
  Family family = Family::SmoothOdd;
  int n = 0;
  int m = 1;      // smooth: number of odd powers in [s1, s2]
  int s1 = 1;     // piecewise only
  int s_hat = 1;  // piecewise only
};

/** Sharp upper bound on the number of zeros of the Melnikov function
 *  near h = 0:
 *    smooth:    n + 2m - 2  (n > 0),  m - 1  (n = 0)
 *    piecewise: s_hat - s1  (n = 0),  n  (n > 0, s_hat = s1),
 *               2(n + s_hat - s1) - 1  (n > 0, s_hat > s1). */
int max_zero_bound(const BoundQuery& q);

struct SignChange {
  double lo = 0, hi = 0;      // bracket, refined to relative width 1e-6
  double f_lo = 0, f_hi = 0;  // values at the original grid bracket
  double root = 0;            // bisection midpoint
};

struct SignCountResult {
  int changes = 0;
  std::vector<SignChange> brackets;
  std::vector<std::string> warnings;  // indeterminate-sign grid points
  nlohmann::json to_json() const;
};

/** Counts sign changes of the evaluator over a geometric grid on
 *  [h_lo, h_hi] (at least 16 points, denser toward 0), refining each
 *  bracket by bisection. Grid points whose |value| falls below 10x the
 *  reported error estimate are flagged as indeterminate. */
SignCountResult count_sign_changes(const std::function<QuadResult(double)>& f,
                                   double h_lo, double h_hi, int grid);

struct Realization {
  BoundQuery query;
  std::vector<double> locations;
  Perturbation perturbation;
  double eps0 = 0;  // validated interval (0, eps0]
  SignCountResult validation;
  bool verified = false;
  std::string diagnostic;
  nlohmann::json to_json() const;
};

/** Constructs a perturbation whose Melnikov function changes sign at the
 *  requested locations, realizing the sharp bound: the leading expansion
 *  coefficients are matched to the polynomial with those roots
 *  (Vandermonde solve), the full-rank coefficient map is inverted
 *  exactly, the truncation tail is margin-checked on the sign lattice,
 *  and every zero is confirmed by a quadrature bracket. Throws
 *  std::invalid_argument on malformed input; an unverifiable result
 *  (e.g. locations too clustered for the truncation margin) comes back
 *  with verified = false and a diagnostic. */
Realization realize_zeros(const BoundQuery& q, const std::vector<double>& locations,
                          int r = -1);

}  // namespace melkit

#endif
