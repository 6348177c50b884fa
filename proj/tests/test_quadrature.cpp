#include <doctest.h>

#include <cmath>

#include "melkit/melnikov.hpp"
#include "melkit/quadrature.hpp"

using namespace melkit;

namespace {

SmoothPerturbation constant_times_y() {
  SmoothPerturbation p;
  p.n = 0;
  p.s1 = 1;
  p.s2 = 1;
  p.q.resize(1);
  p.q[0].a = {Rational(1)};
  return p;
}

double series_value(const BasisTerm& t, int terms, double h) {
  MelnikovCombination c;
  c.family = t.kind == BasisKind::J ? Family::PiecewiseHalf : Family::SmoothOdd;
  c.add(t, Rational(1));
  return expand(c, terms).eval_precise(rational_from_double(h));
}

}  // namespace

TEST_CASE("energy level domain") {
  CHECK_THROWS_AS(EnergyLevel(0.0), std::domain_error);
  CHECK_THROWS_AS(EnergyLevel(2.0), std::domain_error);
  CHECK_THROWS_AS(EnergyLevel(-0.5), std::domain_error);
  CHECK(EnergyLevel(1.995).near_separatrix());
  CHECK(!EnergyLevel(1.5).near_separatrix());
}

TEST_CASE("x_plus") {
  CHECK(x_plus(EnergyLevel(1.0)) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(x_plus(EnergyLevel(0.5)) == doctest::Approx(M_PI / 3).epsilon(1e-14));
  CHECK(x_plus(EnergyLevel(1e-8)) == doctest::Approx(std::sqrt(2e-8)).epsilon(1e-4));
  double prev = 0.0;
  for (double h : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    const double x = x_plus(EnergyLevel(h));
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("small-h anchors") {
  for (double h : {0.001, 0.01}) {
    const QuadResult r = quad_I(0, 1, EnergyLevel(h), 1e-12);
    CHECK(std::fabs(r.value - 2 * M_PI * h) / (2 * M_PI * h) <= 2 * h);
  }
  const QuadResult r3 = quad_I(0, 3, EnergyLevel(0.01), 1e-12);
  CHECK(r3.value == doctest::Approx(3 * M_PI * 1e-4).epsilon(0.01));
  const QuadResult j2 = quad_J(0, 2, EnergyLevel(0.01), 1e-12);
  CHECK(j2.value == doctest::Approx(8 * M_SQRT2 / 3 * 1e-3).epsilon(0.01));
}

TEST_CASE("separatrix limit of the orbit area") {
  const QuadResult r = quad_I(0, 1, EnergyLevel(1.999), 1e-12);
  CHECK(r.near_separatrix);
  CHECK(std::fabs(r.value - 16.0) / 16.0 < 0.005);
}

TEST_CASE("even powers of y vanish on the full orbit") {
  const QuadResult r = quad_I(2, 4, EnergyLevel(0.7), 1e-10);
  CHECK(r.value == 0.0);
  CHECK(r.abs_error_estimate == 0.0);
}

TEST_CASE("half-orbit integral halves the odd full-orbit integral") {
  const double tol = 1e-12;
  const QuadResult full = quad_I(1, 1, EnergyLevel(0.5), tol);
  const QuadResult half = quad_J(1, 1, EnergyLevel(0.5), tol);
  CHECK(std::fabs(half.value - full.value / 2) <=
        10 * tol * std::max(1.0, std::fabs(full.value)));
}

TEST_CASE("leading exponent of J_{3,2} is 4.5") {
  const double v1 = quad_J(3, 2, EnergyLevel(0.01), 1e-13).value;
  const double v2 = quad_J(3, 2, EnergyLevel(0.02), 1e-13).value;
  const double exponent = std::log(v2 / v1) / std::log(2.0);
  CHECK(std::fabs(exponent - 4.5) < 0.05);
}

TEST_CASE("quad_I is positive and increasing in h") {
  for (int i = 0; i <= 3; ++i)
    for (int j : {1, 3}) {
      double prev = 0.0;
      for (double h : {0.05, 0.1, 0.4, 0.9, 1.5}) {
        const QuadResult r = quad_I(i, j, EnergyLevel(h), 1e-11);
        CHECK(r.value > prev);
        prev = r.value;
      }
    }
}

TEST_CASE("tightening the tolerance stays within the reported estimate") {
  for (double h : {0.1, 0.9}) {
    const QuadResult loose = quad_I(2, 3, EnergyLevel(h), 1e-6);
    const QuadResult tight = quad_I(2, 3, EnergyLevel(h), 1e-13);
    CHECK(std::fabs(loose.value - tight.value) <= loose.abs_error_estimate);
  }
}

TEST_CASE("quadrature matches the exact series at small h") {
  for (int i = 0; i <= 3; ++i)
    for (int j : {1, 3, 5})
      for (double h : {0.01, 0.1}) {
        const double quad = quad_I(i, j, EnergyLevel(h), 1e-12).value;
        const double series = series_value({BasisKind::I, i, j}, 25, h);
        CHECK(std::fabs(quad - series) / std::fabs(series) < 1e-8);
      }
  for (int i = 0; i <= 2; ++i)
    for (int j : {2, 4})
      for (double h : {0.01, 0.1}) {
        const double quad = quad_J(i, j, EnergyLevel(h), 1e-12).value;
        const double series = series_value({BasisKind::J, i, j}, 25, h);
        CHECK(std::fabs(quad - series) / std::fabs(series) < 1e-8);
      }
}

TEST_CASE("melnikov quadrature: symmetry cancellations") {
  SmoothPerturbation even_power;
  even_power.n = 1;
  even_power.s1 = 2;
  even_power.s2 = 2;
  even_power.q.resize(1);
  even_power.q[0].a = {Rational(1), Rational(2)};
  const QuadResult r_even = quad_melnikov(even_power, EnergyLevel(0.8), 1e-10);
  CHECK(std::fabs(r_even.value) <= r_even.abs_error_estimate);

  SmoothPerturbation odd_trig;  // sin(x) * y
  odd_trig.n = 1;
  odd_trig.s1 = 1;
  odd_trig.s2 = 1;
  odd_trig.q.resize(1);
  odd_trig.q[0].a = {Rational(0), Rational(0)};
  odd_trig.q[0].a_tilde = {Rational(1)};
  const QuadResult r_odd = quad_melnikov(odd_trig, EnergyLevel(0.8), 1e-10);
  CHECK(std::fabs(r_odd.value) <= r_odd.abs_error_estimate);
}

TEST_CASE("melnikov quadrature reduces to I_{0,1} for Q = y") {
  const double tol = 1e-12;
  const QuadResult m = quad_melnikov(constant_times_y(), EnergyLevel(0.5), tol);
  const QuadResult i01 = quad_I(0, 1, EnergyLevel(0.5), tol);
  CHECK(std::fabs(m.value - i01.value) <=
        2 * tol * std::fabs(i01.value) + m.abs_error_estimate + i01.abs_error_estimate);
}

TEST_CASE("piecewise melnikov quadrature uses both side fields") {
  // Q+ = y, Q- = 0: only the upper half contributes, J_{0,1} = I_{0,1}/2.
  PiecewisePerturbation p;
  p.n = 0;
  p.s1 = 1;
  p.s2 = 1;
  p.s3 = 1;
  p.plus.resize(1);
  p.minus.resize(1);
  p.plus[0].a = {Rational(1)};
  p.minus[0].a = {Rational(0)};
  const QuadResult m = quad_melnikov(p, EnergyLevel(0.5), 1e-12);
  const QuadResult i01 = quad_I(0, 1, EnergyLevel(0.5), 1e-12);
  CHECK(m.value == doctest::Approx(i01.value / 2).epsilon(1e-9));
}
