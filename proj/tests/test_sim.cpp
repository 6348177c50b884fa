#include <doctest.h>

#include <cmath>

#include "melkit/quadrature.hpp"
#include "melkit/sim.hpp"
#include "melkit/zeros.hpp"

using namespace melkit;

namespace {

SmoothPerturbation damping_perturbation() {
  SmoothPerturbation p;  // Q = -y
  p.n = 0;
  p.s1 = 1;
  p.s2 = 1;
  p.q.resize(1);
  p.q[0].a = {Rational(-1)};
  return p;
}

PiecewisePerturbation upper_damping() {
  PiecewisePerturbation p;  // Q+ = -y, Q- = 0
  p.n = 0;
  p.s1 = 1;
  p.s2 = 1;
  p.s3 = 1;
  p.plus.resize(1);
  p.minus.resize(1);
  p.plus[0].a = {Rational(-1)};
  p.minus[0].a = {Rational(0)};
  return p;
}

}  // namespace

TEST_CASE("unperturbed return map conserves energy") {
  SystemSpec spec{0.0, damping_perturbation()};
  const double tol = 1e-10;
  for (double h : {0.1, 0.5, 1.0}) {
    const ReturnSample s = return_map(spec, h, tol);
    REQUIRE(s.ok);
    CHECK(std::fabs(s.h_out - s.h_in) <= 10 * tol);
    CHECK(s.y_crossings == 2);
  }
  // Pendulum period at h = 0.5: 4 K(sin(x_+/2)) with modulus 1/2.
  const ReturnSample s = return_map(spec, 0.5, 1e-10);
  CHECK(s.flight_time == doctest::Approx(6.743).epsilon(1e-3));
}

TEST_CASE("unperturbed trajectory: energy drift and reversibility") {
  SystemSpec spec{0.0, damping_perturbation()};
  const double h0 = 0.5;
  const double tol = 1e-10;
  const Trajectory traj = integrate(spec, 0.0, std::sqrt(2 * h0), 7.0, tol);
  REQUIRE(traj.ok);
  for (const auto& pt : traj.points)
    CHECK(std::fabs(hamiltonian(pt.x, pt.y) - h0) <= 10 * tol);

  // Reversibility through the symmetry (x, y, t) -> (x, -y, -t).
  const TrajectoryPoint end = traj.points.back();
  const Trajectory back = integrate(spec, end.x, -end.y, end.t, tol);
  REQUIRE(back.ok);
  const TrajectoryPoint ret = back.points.back();
  CHECK(std::fabs(ret.x - 0.0) <= 100 * tol * 10);
  CHECK(std::fabs(-ret.y - std::sqrt(2 * h0)) <= 100 * tol * 10);
}

TEST_CASE("damping dissipates energy monotonically") {
  SystemSpec spec{1e-3, damping_perturbation()};
  const Trajectory traj = integrate(spec, 0.0, 1.0, 30.0, 1e-10);
  REQUIRE(traj.ok);
  double prev = hamiltonian(traj.points.front().x, traj.points.front().y);
  for (size_t k = 1; k < traj.points.size(); ++k) {
    const double now = hamiltonian(traj.points[k].x, traj.points[k].y);
    CHECK(now <= prev + 1e-12);
    prev = now;
  }
}

TEST_CASE("piecewise damping acts on the upper arcs only") {
  SystemSpec spec{1e-3, upper_damping()};
  const double h0 = 0.5;
  const ReturnSample s = return_map(spec, h0, 1e-10);
  REQUIRE(s.ok);
  CHECK(s.y_crossings == 2);
  // The full return dissipates half of what the smooth damping does.
  SystemSpec smooth{1e-3, damping_perturbation()};
  const ReturnSample s_smooth = return_map(smooth, h0, 1e-10);
  CHECK((s.h_out - s.h_in) == doctest::Approx(0.5 * (s_smooth.h_out - s_smooth.h_in)).epsilon(5e-3));

  // Energy is conserved along the lower arc: compare H at the two
  // switching events.
  const Trajectory traj = integrate(spec, 0.0, std::sqrt(2 * h0), 7.0, 1e-10);
  REQUIRE(traj.ok);
  std::vector<double> event_h;
  for (const auto& pt : traj.points)
    if (pt.y == 0.0) event_h.push_back(hamiltonian(pt.x, pt.y));
  REQUIRE(event_h.size() >= 2);
  CHECK(event_h[0] < h0 - 1e-5);                      // upper arc dissipated
  CHECK(std::fabs(event_h[1] - event_h[0]) < 1e-9);   // lower arc conserved
}

TEST_CASE("first-order displacement matches the Melnikov value") {
  const double eps = 1e-4;
  SystemSpec spec{eps, damping_perturbation()};
  for (double h : {0.1, 0.5, 1.0}) {
    const ReturnSample s = return_map(spec, h, 1e-11);
    REQUIRE(s.ok);
    const double i01 = quad_I(0, 1, EnergyLevel(h), 1e-12).value;
    CHECK(std::fabs((s.h_out - s.h_in) / eps + i01) <= 5 * eps * i01);
  }
}

TEST_CASE("find_cycles: damping has none, eps = 0 degenerates") {
  SystemSpec spec{1e-4, damping_perturbation()};
  const CycleSearch none = find_cycles(spec, 0.05, 0.8, 16, 1e-10);
  CHECK(none.cycles.empty());
  CHECK(none.diagnostics.empty());

  SystemSpec frozen{0.0, damping_perturbation()};
  const CycleSearch degenerate = find_cycles(frozen, 0.05, 0.8, 16, 1e-10);
  CHECK(degenerate.cycles.empty());
  bool has_note = false;
  for (const auto& d : degenerate.diagnostics)
    has_note = has_note || d.find("degenerate: all fixed") != std::string::npos;
  CHECK(has_note);
}

TEST_CASE("melnikov agreement for the damping perturbation") {
  const double eps = 1e-4;
  SystemSpec spec{eps, damping_perturbation()};
  const AgreementReport rep = melnikov_agreement(spec, {0.1, 0.3, 0.5, 0.7, 1.0}, 1e-11);
  CHECK(rep.signs_match);
  CHECK(rep.max_rel_deviation <= 5 * eps);
}

TEST_CASE("melnikov agreement for the zero perturbation sits at the noise floor") {
  SmoothPerturbation nothing;
  nothing.n = 0;
  nothing.s1 = 1;
  nothing.s2 = 1;
  nothing.q.resize(1);
  nothing.q[0].a = {Rational(0)};
  SystemSpec spec{1e-4, nothing};
  const AgreementReport rep = melnikov_agreement(spec, {0.2, 0.6}, 1e-10);
  CHECK(rep.signs_match);  // vacuous: both columns below noise
  CHECK(rep.max_abs_deviation < 1e-4);
}

TEST_CASE("realized single-zero perturbation produces one limit cycle") {
  BoundQuery q{Family::SmoothOdd, 0, 2};
  const Realization real = realize_zeros(q, {0.05});
  REQUIRE(real.verified);
  SystemSpec spec{1e-4, real.perturbation};
  const CycleSearch found = find_cycles(spec, 0.01, 0.2, 24, 1e-11);
  REQUIRE(found.cycles.size() == 1);
  CHECK(std::fabs(found.cycles[0].h_star - 0.05) <= 0.2 * 0.05);
}

TEST_CASE("spec validation") {
  SystemSpec too_strong{0.5, damping_perturbation()};
  CHECK_THROWS_AS(too_strong.validate(), std::invalid_argument);
  SystemSpec spec{0.0, damping_perturbation()};
  CHECK_THROWS_AS(return_map(spec, 1.9995, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(integrate(spec, M_PI, 0.1, 1.0, 1e-10), std::invalid_argument);
}
