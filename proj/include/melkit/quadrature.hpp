#ifndef MELKIT_QUADRATURE_HPP
#define MELKIT_QUADRATURE_HPP

#include <functional>

#include "melkit/perturbation.hpp"

namespace melkit {

/** Hamiltonian level 0 < h < 2 (oscillatory region of
 *  H = y^2/2 + 1 - cos x). Construction outside the open interval
 *  throws std::domain_error. Levels above 1.99 are accepted but
 *  flagged: tolerance guarantees weaken toward the separatrix. */
class EnergyLevel {
 public:
  explicit EnergyLevel(double h);
  double value() const { return h_; }
  bool near_separatrix() const { return h_ > 1.99; }

 private:
  double h_;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
  bool near_separatrix = false;
};

/** Rightmost abscissa of the orbit Gamma_h: arccos(1-h). */
double x_plus(EnergyLevel h);

/** Adaptive Gauss-Legendre on [a, b] with a 7/15-point error estimate.
 *  Stops when the error sum drops below max(abs_tol, rel_tol*|value|)
 *  or below the roundoff floor of the accumulated |integrand| scale. */
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, double rel_tol,
                              long max_evaluations = 2000000);

/** Full-orbit integral I_{i,j}(h) = oint (1-cos x)^i y^j dx.
 *
 *  Odd j is evaluated through the de-singularizing substitutions
 *  u = sqrt(2) sin(x/2), u = sqrt(h) w, which give
 *  2^{q+3} h^{i+q+1} * int_0^1 w^{2i} (1-w^2)^{q+1/2} (1-w^2 h/2)^{-1/2} dw
 *  for j = 2q+1. Even j vanishes identically by the orbit symmetry and
 *  returns an exact zero. tol is relative (the w-integral is O(1); the
 *  power-of-h prefactor is applied exactly). */
QuadResult quad_I(int i, int j, EnergyLevel h, double tol);

/** Upper-half-orbit integral J_{i,s}(h) = int_{Gamma_h^+} (1-cos x)^i y^s dx,
 *  same substitutions; even s carries the half-power prefactor
 *  2^{q+3/2} h^{i+q+1/2} (s = 2q), odd s is half the I prefactor. */
QuadResult quad_J(int i, int s, EnergyLevel h, double tol);

/** First order Melnikov integral by direct path quadrature, without any
 *  symmetry reduction: both half-orbits are parametrized by
 *  sin(x/2) = sin(x_+/2) sin(phi), phi in [-pi/2, pi/2], which is
 *  analytic for h < 2. Serves as the independent oracle against the
 *  exact series pipeline. */
QuadResult quad_melnikov(const Perturbation& p, EnergyLevel h, double tol);

}  // namespace melkit

#endif
