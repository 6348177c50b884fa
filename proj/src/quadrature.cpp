#include "melkit/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace melkit {

namespace {

struct GLRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

/** Gauss-Legendre nodes by Newton iteration on the Legendre recurrence. */
GLRule make_rule(int n) {
  GLRule rule;
  rule.x.resize(static_cast<size_t>(n));
  rule.w.resize(static_cast<size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1) * z * p2 - (j - 1) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    rule.x[static_cast<size_t>(i)] = -z;
    rule.x[static_cast<size_t>(n - 1 - i)] = z;
    rule.w[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[static_cast<size_t>(n - 1 - i)] = rule.w[static_cast<size_t>(i)];
  }
  return rule;
}

const GLRule& rule7() {
  static const GLRule r = make_rule(7);
  return r;
}
const GLRule& rule15() {
  static const GLRule r = make_rule(15);
  return r;
}

struct Panel {
  double a, b;
  double value;   // 15-point estimate
  double error;   // |G15 - G7|, floored at panel roundoff
  double resabs;  // 15-point estimate of int |f|
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double g15 = 0.0, g7 = 0.0, resabs = 0.0;
  const GLRule& r15 = rule15();
  for (size_t k = 0; k < r15.x.size(); ++k) {
    const double fx = f(mid + half * r15.x[k]);
    g15 += r15.w[k] * fx;
    resabs += r15.w[k] * std::fabs(fx);
  }
  const GLRule& r7 = rule7();
  for (size_t k = 0; k < r7.x.size(); ++k) g7 += r7.w[k] * f(mid + half * r7.x[k]);
  Panel p;
  p.a = a;
  p.b = b;
  p.value = g15 * half;
  p.resabs = resabs * half;
  const double eps = std::numeric_limits<double>::epsilon();
  p.error = std::max(std::fabs(g15 - g7) * half, 50.0 * eps * p.resabs);
  return p;
}

}  // namespace

EnergyLevel::EnergyLevel(double h) : h_(h) {
  if (!(h > 0.0 && h < 2.0))
    throw std::domain_error("EnergyLevel: h must lie in the oscillatory region (0, 2)");
}

double x_plus(EnergyLevel h) { return std::acos(1.0 - h.value()); }

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, double rel_tol,
                              long max_evaluations) {
  const double eps = std::numeric_limits<double>::epsilon();
  auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> panels(worse);

  double value = 0.0, error = 0.0, resabs = 0.0;
  auto push = [&](const Panel& p) {
    value += p.value;
    error += p.error;
    resabs += p.resabs;
    panels.push(p);
  };
  push(evaluate_panel(f, a, b));
  long evals = 22;

  QuadResult out;
  const double min_width = 1e-14 * std::fabs(b - a);
  while (true) {
    out.value = value;
    out.abs_error_estimate = error;
    out.evaluations = evals;
    const double target = std::max(abs_tol, rel_tol * std::fabs(value));
    const double noise_floor = 100.0 * eps * resabs;
    if (error <= target || error <= 2.0 * noise_floor) {
      out.converged = true;
      return out;
    }
    const Panel worst = panels.top();
    if (evals + 44 > max_evaluations || worst.b - worst.a < min_width) {
      out.converged = false;  // best estimate, tolerance not reached
      return out;
    }
    panels.pop();
    value -= worst.value;
    error -= worst.error;
    resabs -= worst.resabs;
    const double mid = 0.5 * (worst.a + worst.b);
    push(evaluate_panel(f, worst.a, mid));
    push(evaluate_panel(f, mid, worst.b));
    evals += 44;
  }
}

namespace {

/** w-integral int_0^1 w^{2i} (1-w^2)^{half_power/2} (1 - w^2 h/2)^{-1/2} dw.
 *  half_power is 2q+1 (odd y-powers) or 2q (even), q >= 0. */
QuadResult w_integral(int i, int twice_power, double h, double tol) {
  auto f = [i, twice_power, h](double w) {
    const double w2 = w * w;
    const double one_minus = std::max(0.0, 1.0 - w2);
    double v = std::pow(w2, i) * std::pow(one_minus, 0.5 * twice_power);
    return v / std::sqrt(1.0 - 0.5 * w2 * h);
  };
  return integrate_adaptive(f, 0.0, 1.0, 0.0, tol);
}

}  // namespace

QuadResult quad_I(int i, int j, EnergyLevel h, double tol) {
  if (i < 0 || j < 1) throw std::invalid_argument("quad_I: need i >= 0, j >= 1");
  if (tol <= 0) throw std::invalid_argument("quad_I: tol must be positive");
  if (j % 2 == 0) {
    // Both half-orbits cancel for even powers of y.
    QuadResult zero;
    zero.near_separatrix = h.near_separatrix();
    return zero;
  }
  const int q = (j - 1) / 2;
  QuadResult res = w_integral(i, 2 * q + 1, h.value(), tol);
  const double prefactor = std::pow(2.0, q + 3) * std::pow(h.value(), i + q + 1);
  res.value *= prefactor;
  res.abs_error_estimate *= prefactor;
  res.near_separatrix = h.near_separatrix();
  return res;
}

QuadResult quad_J(int i, int s, EnergyLevel h, double tol) {
  if (i < 0 || s < 1) throw std::invalid_argument("quad_J: need i >= 0, s >= 1");
  if (tol <= 0) throw std::invalid_argument("quad_J: tol must be positive");
  QuadResult res;
  double prefactor;
  if (s % 2 == 0) {
    const int q = s / 2;
    res = w_integral(i, 2 * q, h.value(), tol);
    prefactor = std::pow(2.0, q + 1.5) * std::pow(h.value(), i + q + 0.5);
  } else {
    const int q = (s - 1) / 2;
    res = w_integral(i, 2 * q + 1, h.value(), tol);
    prefactor = std::pow(2.0, q + 2) * std::pow(h.value(), i + q + 1);
  }
  res.value *= prefactor;
  res.abs_error_estimate *= prefactor;
  res.near_separatrix = h.near_separatrix();
  return res;
}

QuadResult quad_melnikov(const Perturbation& p, EnergyLevel h, double tol) {
  if (tol <= 0) throw std::invalid_argument("quad_melnikov: tol must be positive");
  const double hv = h.value();
  const double s0 = std::sqrt(0.5 * hv);  // sin(x_+/2)
  const double y_amp = std::sqrt(2.0 * hv);

  // One half-orbit, oriented along the flow: the upper arc runs left to
  // right, the lower arc right to left (hence the sign on `side`).
  auto half_arc = [&](int side) {
    auto f = [&, side](double phi) {
      const double sp = std::sin(phi);
      const double sx2 = s0 * sp;                       // sin(x/2)
      const double x = 2.0 * std::asin(sx2);
      const double y = side * y_amp * std::cos(phi);
      const double dxdphi = 2.0 * s0 * std::cos(phi) / std::sqrt(1.0 - sx2 * sx2);
      return eval_perturbation(p, x, y, side) * static_cast<double>(side) * dxdphi;
    };
    return integrate_adaptive(f, -0.5 * M_PI, 0.5 * M_PI, 0.0, tol);
  };

  const QuadResult upper = half_arc(+1);
  const QuadResult lower = half_arc(-1);
  QuadResult out;
  out.value = upper.value + lower.value;
  out.abs_error_estimate = upper.abs_error_estimate + lower.abs_error_estimate;
  out.evaluations = upper.evaluations + lower.evaluations;
  out.converged = upper.converged && lower.converged;
  out.near_separatrix = h.near_separatrix();
  return out;
}

}  // namespace melkit
