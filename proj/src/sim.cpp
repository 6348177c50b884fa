#include "melkit/sim.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "melkit/parallel.hpp"
#include "melkit/quadrature.hpp"

namespace melkit {

void SystemSpec::validate() const {
  if (!(std::fabs(epsilon) <= 0.1))
    throw std::invalid_argument("SystemSpec: |epsilon| must be <= 0.1");
}

namespace {

struct Vec2 {
  double x = 0, y = 0;
};

/** Dormand-Prince 5(4) step with the standard dense-output interpolant. */
class Dopri5 {
 public:
  using Rhs = std::function<Vec2(double, const Vec2&)>;

  explicit Dopri5(Rhs rhs, double tol) : rhs_(std::move(rhs)), tol_(tol) {}

  /** One accepted step from (t, y), no longer than h_cap; returns false
   *  when the step size underflows. On success fills t_new, y_new and
   *  the dense coefficients for [t, t_new]. */
  bool step(double t, const Vec2& y, double& t_new, Vec2& y_new,
            double h_cap = std::numeric_limits<double>::infinity()) {
    if (!have_k1_) {
      k_[0] = rhs_(t, y);
      have_k1_ = true;
    }
    while (true) {
      if (h_ < 1e-14) return false;
      const double h = std::min(h_, h_cap);
      stage(t, y, h);
      const Vec2 y5 = increment(y, h);
      const double err = error_norm(y, y5, h);
      if (err <= 1.0) {
        build_dense(t, y, y5, h);
        t_new = t + h;
        y_new = y5;
        k_[0] = k_[6];  // FSAL
        if (h >= 0.999 * h_) {  // a capped sliver says nothing about h_
          const double fac =
              std::clamp(0.9 * std::pow(err > 1e-30 ? err : 1e-30, -0.2), 0.2, 5.0);
          h_ = std::min(h * fac, h_max_);
        }
        return true;
      }
      h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }

  /** Dense evaluation inside the last accepted step. */
  Vec2 dense(double t) const {
    const double theta = (t - dense_t0_) / dense_h_;
    const double th1 = 1.0 - theta;
    Vec2 out;
    out.x = rcont_[0].x + theta * (rcont_[1].x + th1 * (rcont_[2].x + theta * (rcont_[3].x + th1 * rcont_[4].x)));
    out.y = rcont_[0].y + theta * (rcont_[1].y + th1 * (rcont_[2].y + theta * (rcont_[3].y + th1 * rcont_[4].y)));
    return out;
  }

  void reset_fsal() { have_k1_ = false; }
  void set_initial_step(double h) { h_ = h; }

 private:
  void stage(double t, const Vec2& y, double h) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    auto at = [&](double c, double ax1, double ax2, double ax3, double ax4,
                  double ax5, double ax6) {
      Vec2 arg{y.x + h * (ax1 * k_[0].x + ax2 * k_[1].x + ax3 * k_[2].x +
                          ax4 * k_[3].x + ax5 * k_[4].x + ax6 * k_[5].x),
               y.y + h * (ax1 * k_[0].y + ax2 * k_[1].y + ax3 * k_[2].y +
                          ax4 * k_[3].y + ax5 * k_[4].y + ax6 * k_[5].y)};
      return rhs_(t + c * h, arg);
    };
    k_[1] = at(0.2, a21, 0, 0, 0, 0, 0);
    k_[2] = at(0.3, a31, a32, 0, 0, 0, 0);
    k_[3] = at(0.8, a41, a42, a43, 0, 0, 0);
    k_[4] = at(8.0 / 9, a51, a52, a53, a54, 0, 0);
    k_[5] = at(1.0, a61, a62, a63, a64, a65, 0);
    k_[6] = at(1.0, b1, 0, b3, b4, b5, b6);
  }

  Vec2 increment(const Vec2& y, double h) const {
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    return {y.x + h * (b1 * k_[0].x + b3 * k_[2].x + b4 * k_[3].x + b5 * k_[4].x + b6 * k_[5].x),
            y.y + h * (b1 * k_[0].y + b3 * k_[2].y + b4 * k_[3].y + b5 * k_[4].y + b6 * k_[5].y)};
  }

  double error_norm(const Vec2& y0, const Vec2& y1, double h) const {
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    const double ex = h * (e1 * k_[0].x + e3 * k_[2].x + e4 * k_[3].x +
                           e5 * k_[4].x + e6 * k_[5].x + e7 * k_[6].x);
    const double ey = h * (e1 * k_[0].y + e3 * k_[2].y + e4 * k_[3].y +
                           e5 * k_[4].y + e6 * k_[5].y + e7 * k_[6].y);
    const double scx = tol_ + tol_ * std::max(std::fabs(y0.x), std::fabs(y1.x));
    const double scy = tol_ + tol_ * std::max(std::fabs(y0.y), std::fabs(y1.y));
    const double rx = ex / scx, ry = ey / scy;
    return std::sqrt(0.5 * (rx * rx + ry * ry));
  }

  void build_dense(double t, const Vec2& y0, const Vec2& y1, double h) {
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
    dense_t0_ = t;
    dense_h_ = h;
    auto fill = [&](double Vec2::* c) {
      const double ydiff = y1.*c - y0.*c;
      const double bspl = h * k_[0].*c - ydiff;
      rcont_[0].*c = y0.*c;
      rcont_[1].*c = ydiff;
      rcont_[2].*c = bspl;
      rcont_[3].*c = ydiff - h * k_[6].*c - bspl;
      rcont_[4].*c = h * (d1 * k_[0].*c + d3 * k_[2].*c + d4 * k_[3].*c +
                          d5 * k_[4].*c + d6 * k_[5].*c + d7 * k_[6].*c);
    };
    fill(&Vec2::x);
    fill(&Vec2::y);
  }

  Rhs rhs_;
  double tol_;
  double h_ = 1e-3;
  double h_max_ = 0.5;
  bool have_k1_ = false;
  Vec2 k_[7];
  double dense_t0_ = 0, dense_h_ = 0;
  Vec2 rcont_[5];
};

constexpr double kEventTol = 1e-12;

/** Locates g(state(t)) = 0 inside the last accepted step by bisection on
 *  the dense interpolant. */
double locate_event(const Dopri5& stepper, const std::function<double(const Vec2&)>& g,
                    double t_lo, double t_hi) {
  double g_lo = g(stepper.dense(t_lo));
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (t_lo + t_hi);
    const double g_mid = g(stepper.dense(mid));
    if (std::fabs(g_mid) < kEventTol) return mid;
    if ((g_mid > 0) == (g_lo > 0)) {
      t_lo = mid;
      g_lo = g_mid;
    } else {
      t_hi = mid;
    }
    if (t_hi - t_lo < 1e-15 * std::max(1.0, std::fabs(t_hi))) break;
  }
  return 0.5 * (t_lo + t_hi);
}

struct EventDriver {
  const SystemSpec& spec;
  double tol;
  bool piecewise;
  bool want_section = false;
  int side = +1;

  Vec2 rhs(double, const Vec2& v) const {
    const double q = eval_perturbation(spec.perturbation, v.x, v.y, side);
    return {v.y, -std::sin(v.x) + spec.epsilon * q};
  }

  /** Integrates until t_max or until on_step asks to stop. on_step sees
   *  every accepted step end and every located event (flag = 'y' for a
   *  side switch, 'x' for a section crossing, 0 otherwise). */
  template <typename Callback>
  bool run(Vec2 state, double t_max, Callback&& on_step, std::string* error) {
    side = state.y >= 0 ? +1 : -1;
    Dopri5 stepper([this](double t, const Vec2& v) { return rhs(t, v); }, tol);
    double t = 0.0;
    double prev_x = state.x;
    while (t_max - t > 1e-12) {
      double t_new;
      Vec2 y_new;
      if (!stepper.step(t, state, t_new, y_new, t_max - t)) {
        if (error) *error = "step size underflow";
        return false;
      }
      // Earliest event inside (t, t_new]: a y sign change (field switch)
      // or an x section crossing from x < 0 with y > 0.
      bool has_event = false;
      double t_event = t_new;
      char kind = 0;
      if (state.y != 0.0 && (state.y > 0) != (y_new.y > 0)) {
        const double te = locate_event(
            stepper, [](const Vec2& v) { return v.y; }, t, t_new);
        has_event = true;
        t_event = te;
        kind = 'y';
      }
      if (want_section && prev_x < 0 && y_new.x >= 0) {
        const double te = locate_event(
            stepper, [](const Vec2& v) { return v.x; }, t, t_new);
        const Vec2 at = stepper.dense(te);
        if (at.y > 0 && (!has_event || te < t_event)) {
          has_event = true;
          t_event = te;
          kind = 'x';
        }
      }
      if (has_event) {
        state = stepper.dense(t_event);
        t = t_event;
        if (kind == 'y') {
          state.y = 0.0;  // |y| < 1e-12 at the located event; pinning it
                          // to the switching line prevents re-triggering
          side = -side;
        }
        stepper.reset_fsal();  // the cached derivative is stale after a jump
        if (!on_step(t, state, kind)) return true;
        prev_x = state.x;
        continue;
      }
      t = t_new;
      state = y_new;
      prev_x = state.x;
      if (!on_step(t, state, static_cast<char>(0))) return true;
      if (hamiltonian(state.x, state.y) > 2.0 - 1e-3) {
        if (error) *error = "region exit: orbit left the oscillatory region";
        return false;
      }
    }
    if (error) *error = "time budget exhausted";
    return false;
  }
};

}  // namespace

Trajectory integrate(const SystemSpec& spec, double x0, double y0, double t_max,
                     double tol) {
  spec.validate();
  if (tol <= 0) throw std::invalid_argument("integrate: tol must be positive");
  if (hamiltonian(x0, y0) >= 2.0 - 1e-6)
    throw std::invalid_argument("integrate: initial state outside the oscillatory region");
  Trajectory traj;
  traj.points.push_back({0.0, x0, y0});
  EventDriver driver{spec, tol, std::holds_alternative<PiecewisePerturbation>(spec.perturbation)};
  std::string error;
  const bool finished = driver.run(
      {x0, y0}, t_max,
      [&](double t, const Vec2& v, char) {
        traj.points.push_back({t, v.x, v.y});
        return t < t_max;
      },
      &error);
  if (!finished && error != "time budget exhausted") {
    traj.ok = false;
    traj.error = error;
  }
  return traj;
}

ReturnSample return_map(const SystemSpec& spec, double h, double tol) {
  spec.validate();
  if (!(h > 0 && h < 2.0 - 1e-3))
    throw std::invalid_argument("return_map: need 0 < h < 2 - margin");
  ReturnSample sample;
  sample.h_in = h;
  const double y0 = std::sqrt(2.0 * h);

  EventDriver driver{spec, tol, std::holds_alternative<PiecewisePerturbation>(spec.perturbation)};
  driver.want_section = true;
  std::string error;
  bool returned = false;
  // Generous budget: the period is ~2 pi near the center and grows
  // logarithmically toward the separatrix.
  const double t_budget = 500.0;
  const bool finished = driver.run(
      {0.0, y0}, t_budget,
      [&](double t, const Vec2& v, char kind) {
        if (kind == 'y') ++sample.y_crossings;
        if (kind == 'x') {
          sample.flight_time = t;
          sample.h_out = 0.5 * v.y * v.y;
          returned = true;
          return false;
        }
        return true;
      },
      &error);
  if (!finished || !returned) {
    sample.ok = false;
    sample.error = returned ? error : (error.empty() ? "no return within time budget" : error);
  }
  return sample;
}

CycleSearch find_cycles(const SystemSpec& spec, double h_lo, double h_hi, int grid,
                        double tol) {
  if (grid < 16) throw std::invalid_argument("find_cycles: grid must be >= 16");
  if (!(h_lo > 0 && h_lo < h_hi)) throw std::invalid_argument("find_cycles: bad range");
  CycleSearch out;
  const double noise = 1e3 * tol;

  std::vector<double> h(static_cast<size_t>(grid));
  std::vector<double> d(static_cast<size_t>(grid));
  std::vector<bool> valid(static_cast<size_t>(grid));
  for (int k = 0; k < grid; ++k)
    h[static_cast<size_t>(k)] = h_lo + (h_hi - h_lo) * k / (grid - 1);
  parallel_for(h.size(), [&](size_t k) {
    const ReturnSample s = return_map(spec, h[k], tol);
    valid[k] = s.ok;
    d[k] = s.ok ? s.h_out - s.h_in : 0.0;
  });

  int determinate = 0;
  int prev_sign = 0;
  size_t prev_idx = 0;
  for (size_t k = 0; k < h.size(); ++k) {
    if (!valid[k]) {
      out.diagnostics.push_back("return map failed at h = " + std::to_string(h[k]));
      continue;
    }
    if (std::fabs(d[k]) < noise) {
      out.diagnostics.push_back("indeterminate displacement at h = " + std::to_string(h[k]) +
                                " (below integrator noise floor)");
      continue;
    }
    ++determinate;
    const int s = d[k] > 0 ? 1 : -1;
    if (prev_sign != 0 && s != prev_sign) {
      double lo = h[prev_idx], hi = h[k];
      double d_lo = d[prev_idx];
      for (int iter = 0; iter < 60 && (hi - lo) > 1e-6 * 0.5 * (hi + lo); ++iter) {
        const double mid = 0.5 * (lo + hi);
        const ReturnSample s_mid = return_map(spec, mid, tol);
        if (!s_mid.ok || std::fabs(s_mid.h_out - mid) < noise) break;
        if (((s_mid.h_out - mid) > 0 ? 1 : -1) == (d_lo > 0 ? 1 : -1))
          lo = mid;
        else
          hi = mid;
      }
      CycleEstimate cycle;
      cycle.h_lo = lo;
      cycle.h_hi = hi;
      cycle.h_star = 0.5 * (lo + hi);
      cycle.stability = prev_sign > 0 ? -1 : +1;  // + -> - means attracting
      out.cycles.push_back(cycle);
    }
    prev_sign = s;
    prev_idx = k;
  }
  if (determinate == 0)
    out.diagnostics.push_back("degenerate: all fixed (every displacement below noise floor)");
  return out;
}

AgreementReport melnikov_agreement(const SystemSpec& spec,
                                   const std::vector<double>& h_grid, double tol) {
  spec.validate();
  if (spec.epsilon == 0.0)
    throw std::invalid_argument("melnikov_agreement: epsilon must be nonzero");
  AgreementReport rep;
  rep.rows.resize(h_grid.size());
  parallel_for(h_grid.size(), [&](size_t k) {
    const double h = h_grid[k];
    const ReturnSample s = return_map(spec, h, tol);
    const QuadResult m = quad_melnikov(spec.perturbation, EnergyLevel(h), 1e-11);
    rep.rows[k] = {h, s.ok ? (s.h_out - s.h_in) / spec.epsilon : 0.0, m.value};
  });
  double max_m = 0.0;
  for (const auto& row : rep.rows) max_m = std::max(max_m, std::fabs(row.melnikov));
  const double noise = 1e3 * tol / std::fabs(spec.epsilon);
  for (const auto& row : rep.rows) {
    const double dev = std::fabs(row.d_over_eps - row.melnikov);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
    if (std::fabs(row.melnikov) > 1e-6 * max_m)
      rep.max_rel_deviation = std::max(rep.max_rel_deviation, dev / std::fabs(row.melnikov));
    if (std::fabs(row.d_over_eps) > noise && std::fabs(row.melnikov) > noise)
      rep.signs_match = rep.signs_match && ((row.d_over_eps > 0) == (row.melnikov > 0));
  }
  return rep;
}

}  // namespace melkit
