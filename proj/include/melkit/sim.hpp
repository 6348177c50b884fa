#ifndef MELKIT_SIM_HPP
#define MELKIT_SIM_HPP

#include <string>
#include <vector>

#include "melkit/perturbation.hpp"

namespace melkit {

/** x' = y, y' = -sin x + eps ( Q(x,y) | Q^{+-}(x,y) on +-y > 0 ). */
struct SystemSpec {
  double epsilon = 0.0;
  Perturbation perturbation;

  void validate() const;  // |epsilon| <= 0.1
};

inline double hamiltonian(double x, double y) {
  return 0.5 * y * y + (1.0 - std::cos(x));
}

struct TrajectoryPoint {
  double t, x, y;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  bool ok = true;
  std::string error;
};

/** Adaptive Dormand-Prince integration from (x0, y0). For piecewise
 *  perturbations, y = 0 crossings are located on the dense interpolant
 *  to |y| < 1e-12 and the side field switches exactly at the event. The
 *  orbit must stay inside the oscillatory region. */
Trajectory integrate(const SystemSpec& spec, double x0, double y0, double t_max,
                     double tol);

struct ReturnSample {
  double h_in = 0;
  double h_out = 0;
  double flight_time = 0;
  int y_crossings = 0;
  bool ok = true;
  std::string error;
};

/** First return to the section {x = 0, y > 0} from (0, sqrt(2h));
 *  h_out = y^2/2 at the return crossing (located to |x| < 1e-12). */
ReturnSample return_map(const SystemSpec& spec, double h, double tol = 1e-10);

struct CycleEstimate {
  double h_star = 0;
  double h_lo = 0, h_hi = 0;
  int stability = 0;  // -1: attracting (displacement decreasing), +1: repelling
};

struct CycleSearch {
  std::vector<CycleEstimate> cycles;
  std::vector<std::string> diagnostics;
};

/** Brackets sign changes of the return displacement d(h) = h_out - h_in
 *  over a grid and refines them by bisection. Displacements below the
 *  integrator noise floor are reported as indeterminate, never as
 *  cycles. */
CycleSearch find_cycles(const SystemSpec& spec, double h_lo, double h_hi, int grid,
                        double tol = 1e-10);

struct AgreementRow {
  double h = 0;
  double d_over_eps = 0;
  double melnikov = 0;
};

struct AgreementReport {
  std::vector<AgreementRow> rows;
  double max_abs_deviation = 0;
  double max_rel_deviation = 0;
  bool signs_match = true;
};

/** Tabulates d(h)/eps against the Melnikov quadrature on the grid:
 *  first-order theory gives d = eps M(h) + O(eps^2). */
AgreementReport melnikov_agreement(const SystemSpec& spec,
                                   const std::vector<double>& h_grid,
                                   double tol = 1e-10);

}  // namespace melkit

#endif
