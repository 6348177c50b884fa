#include <doctest.h>

#include <random>

#include "melkit/linalg.hpp"
#include "melkit/melnikov.hpp"
#include "melkit/quadrature.hpp"

using namespace melkit;

namespace {

Rational coeff_of(const MelnikovCombination& c, BasisKind kind, int i, int j) {
  const auto it = c.terms.find({kind, i, j});
  return it == c.terms.end() ? Rational(0) : it->second;
}

std::vector<std::vector<Rational>> random_table(std::mt19937& rng, int rows, int cols) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::vector<std::vector<Rational>> table(static_cast<size_t>(rows),
                                           std::vector<Rational>(static_cast<size_t>(cols)));
  for (auto& row : table)
    for (auto& v : row) v = make_rational(num(rng), 1 + std::abs(num(rng)));
  return table;
}

}  // namespace

TEST_CASE("even part in the (1-cos) basis") {
  TrigPoly constant{{Rational(1)}, {}};
  CHECK(even_part_to_cos_basis(constant).ctilde == std::vector<Rational>{Rational(1)});
  TrigPoly cosine{{Rational(0), Rational(1)}, {}};
  CHECK(even_part_to_cos_basis(cosine).ctilde ==
        std::vector<Rational>{Rational(1), Rational(-1)});
  TrigPoly cos_sq{{Rational(0), Rational(0), Rational(1)}, {}};
  CHECK(even_part_to_cos_basis(cos_sq).ctilde ==
        std::vector<Rational>{Rational(1), Rational(-2), Rational(1)});
  // The sin(x) part never contributes.
  TrigPoly with_sin{{Rational(2)}, {}};
  with_sin.a_tilde = {};
  TrigPoly odd_only{{Rational(0), Rational(0)}, {Rational(5)}};
  CHECK(even_part_to_cos_basis(odd_only).ctilde ==
        std::vector<Rational>{Rational(0), Rational(0)});
}

TEST_CASE("w-basis conversion round trip") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<Rational> a(5);
    for (auto& v : a) v = make_rational(num(rng), 1 + std::abs(num(rng)));
    TrigPoly p{a, {}};
    CHECK(cos_powers_from_w_basis(even_part_to_cos_basis(p).ctilde) == a);
  }
}

TEST_CASE("assemble_smooth keeps only odd powers") {
  SmoothPerturbation even_only;
  even_only.n = 0;
  even_only.s1 = 2;
  even_only.s2 = 2;
  even_only.q.resize(1);
  even_only.q[0].a = {Rational(3)};
  CHECK(assemble_smooth(even_only).empty());

  SmoothPerturbation damping;
  damping.n = 0;
  damping.s1 = 1;
  damping.s2 = 1;
  damping.q.resize(1);
  damping.q[0].a = {Rational(1)};
  const MelnikovCombination c = assemble_smooth(damping);
  CHECK(c.terms.size() == 1);
  CHECK(coeff_of(c, BasisKind::I, 0, 1) == Rational(1));

  SmoothPerturbation wide;
  wide.n = 1;
  wide.s1 = 1;
  wide.s2 = 4;
  wide.q.resize(4);
  for (auto& poly : wide.q) poly.a = {Rational(1), Rational(1)};
  const MelnikovCombination w = assemble_smooth(wide);
  for (const auto& [t, coeff] : w.terms) {
    CHECK(t.kind == BasisKind::I);
    CHECK((t.j == 1 || t.j == 3));  // powers 2 and 4 dropped
  }
}

TEST_CASE("assemble_piecewise sign rule") {
  // Odd power: the sides add. Q+ = Q- = 1 at s = 1 gives 2 J_{0,1}.
  PiecewisePerturbation p;
  p.n = 0;
  p.s1 = 1;
  p.s2 = 1;
  p.s3 = 1;
  p.plus.resize(1);
  p.minus.resize(1);
  p.plus[0].a = {Rational(1)};
  p.minus[0].a = {Rational(1)};
  const MelnikovCombination odd = assemble_piecewise(p);
  CHECK(odd.terms.size() == 1);
  CHECK(coeff_of(odd, BasisKind::J, 0, 1) == Rational(2));

  // Even power with Q+ = Q-: the reversed lower arc cancels the upper.
  PiecewisePerturbation q;
  q.n = 0;
  q.s1 = 2;
  q.s2 = 2;
  q.s3 = 2;
  q.plus.resize(1);
  q.minus.resize(1);
  q.plus[0].a = {Rational(5)};
  q.minus[0].a = {Rational(5)};
  CHECK(assemble_piecewise(q).empty());

  // Pure odd trig part vanishes.
  PiecewisePerturbation r;
  r.n = 1;
  r.s1 = 1;
  r.s2 = 1;
  r.s3 = 1;
  r.plus.resize(1);
  r.minus.resize(1);
  r.plus[0].a = {Rational(0), Rational(0)};
  r.plus[0].a_tilde = {Rational(1)};
  r.minus[0].a = {Rational(0), Rational(0)};
  CHECK(assemble_piecewise(r).empty());
}

TEST_CASE("split_piecewise rewrites odd powers over I with a half factor") {
  PiecewisePerturbation p;
  p.n = 0;
  p.s1 = 1;
  p.s2 = 2;
  p.s3 = 1;
  p.plus.resize(2);
  p.minus.resize(1);
  p.plus[0].a = {Rational(3)};
  p.plus[1].a = {Rational(4)};
  p.minus[0].a = {Rational(0)};
  const auto [odd, even] = split_piecewise(assemble_piecewise(p));
  CHECK(coeff_of(odd, BasisKind::I, 0, 1) == Rational(3, 2));
  CHECK(coeff_of(even, BasisKind::J, 0, 2) == Rational(4));
}

TEST_CASE("rewrite_I frozen instances") {
  // I_{0,3} = 6 I_{1,1} + I_{1,3} - 3 I_{2,1}
  const LinearRelation za = rewrite_I(0, 0, 0);
  CHECK(za.lhs == BasisTerm{BasisKind::I, 0, 3});
  MelnikovCombination rhs;
  for (const auto& [t, c] : za.rhs) rhs.add(t, c);
  CHECK(coeff_of(rhs, BasisKind::I, 1, 1) == Rational(6));
  CHECK(coeff_of(rhs, BasisKind::I, 1, 3) == Rational(1));
  CHECK(coeff_of(rhs, BasisKind::I, 2, 1) == Rational(-3));

  // I_{0,3} = 6 I_{1,1} - I_{2,1} + (1/3)(2 I_{2,3} - 3 I_{3,1})
  const LinearRelation zb = rewrite_I(0, 0, 1);
  MelnikovCombination rhs2;
  for (const auto& [t, c] : zb.rhs) rhs2.add(t, c);
  CHECK(coeff_of(rhs2, BasisKind::I, 1, 1) == Rational(6));
  CHECK(coeff_of(rhs2, BasisKind::I, 2, 1) == Rational(-1));
  CHECK(coeff_of(rhs2, BasisKind::I, 2, 3) == Rational(2, 3));
  CHECK(coeff_of(rhs2, BasisKind::I, 3, 1) == Rational(-1));
}

TEST_CASE("rewrite_J frozen instances") {
  // J_{0,4} = 8 J_{1,2} + J_{1,4} - 4 J_{2,2}
  const LinearRelation zf = rewrite_J(0, 1, 0);
  CHECK(zf.lhs == BasisTerm{BasisKind::J, 0, 4});
  MelnikovCombination rhs;
  for (const auto& [t, c] : zf.rhs) rhs.add(t, c);
  CHECK(coeff_of(rhs, BasisKind::J, 1, 2) == Rational(8));
  CHECK(coeff_of(rhs, BasisKind::J, 1, 4) == Rational(1));
  CHECK(coeff_of(rhs, BasisKind::J, 2, 2) == Rational(-4));

  // J_{1,4} = (8/3) J_{2,2} + (1/3)(2 J_{2,4} - 4 J_{3,2})
  const LinearRelation zf1 = rewrite_J(1, 1, 0);
  MelnikovCombination rhs2;
  for (const auto& [t, c] : zf1.rhs) rhs2.add(t, c);
  CHECK(coeff_of(rhs2, BasisKind::J, 2, 2) == Rational(8, 3));
  CHECK(coeff_of(rhs2, BasisKind::J, 2, 4) == Rational(2, 3));
  CHECK(coeff_of(rhs2, BasisKind::J, 3, 2) == Rational(-4, 3));

  CHECK_THROWS_AS(rewrite_J(0, 0, 0), std::invalid_argument);
}

TEST_CASE("rewrite identities hold as exact series") {
  for (int i = 0; i <= 4; ++i)
    for (int r = 0; r <= 3; ++r)
      for (int k = 0; k <= 3; ++k) {
        {
          const LinearRelation rel = rewrite_I(i, r, k);
          MelnikovCombination residual;
          residual.add(rel.lhs, Rational(1));
          for (const auto& [t, c] : rel.rhs) residual.add(t, -c);
          const int cap = min_base_half(residual) + 40;
          CHECK(expand_to_cap(residual, cap).vanishes_through(cap));
        }
        if (r >= 1) {
          const LinearRelation rel = rewrite_J(i, r, k);
          MelnikovCombination residual;
          residual.family = Family::PiecewiseHalf;
          residual.add(rel.lhs, Rational(1));
          for (const auto& [t, c] : rel.rhs) residual.add(t, -c);
          const int cap = min_base_half(residual) + 40;
          CHECK(expand_to_cap(residual, cap).vanishes_through(cap));
        }
      }
}

TEST_CASE("L and Lt series match their defining combinations") {
  for (int i = 0; i <= 3; ++i)
    for (int q = 1; q <= 3; ++q) {
      MelnikovCombination def;
      def.add({BasisKind::I, i + 1, 2 * q + 1}, Rational(i + 1));
      def.add({BasisKind::I, i + 2, 2 * q - 1}, Rational(-(2 * q + 1)));
      const int cap = 2 * (i + q + 2) + 30;
      const HalfPowerSeries direct = term_series({BasisKind::L, i, q}, cap);
      CHECK((expand_to_cap(def, cap) - direct).vanishes_through(cap));

      MelnikovCombination deft;
      deft.family = Family::PiecewiseHalf;
      deft.add({BasisKind::J, i + 1, 2 * q + 2}, Rational(i + 1));
      deft.add({BasisKind::J, i + 2, 2 * q}, Rational(-(2 * q + 2)));
      const HalfPowerSeries directt = term_series({BasisKind::Lt, i, q}, cap);
      CHECK((expand_to_cap(deft, cap) - directt).vanishes_through(cap));
    }
}

TEST_CASE("frozen leading terms") {
  // I_{0,1} = 2 pi h + (pi/8) h^2 + (3 pi/128) h^3 + ...
  const HalfPowerSeries i01 = term_series({BasisKind::I, 0, 1}, 8);
  CHECK(i01.at_half(2) == ExactCoeff::pi(Rational(2)));
  CHECK(i01.at_half(4) == ExactCoeff::pi(Rational(1, 8)));
  CHECK(i01.at_half(6) == ExactCoeff::pi(Rational(3, 128)));
  // J_{0,2} = (8 sqrt2/3) h^{3/2} + (2 sqrt2/15) h^{5/2} + ...
  const HalfPowerSeries j02 = term_series({BasisKind::J, 0, 2}, 6);
  CHECK(j02.at_half(3) == ExactCoeff::rt2(Rational(8, 3)));
  CHECK(j02.at_half(5) == ExactCoeff::rt2(Rational(2, 15)));
  // L_{1,1} = -(3 pi/32) h^4 + O(h^5)
  int he = 0;
  ExactCoeff lead;
  CHECK(term_series({BasisKind::L, 1, 1}, 10).leading_term(he, lead));
  CHECK(he == 8);
  CHECK(lead == ExactCoeff::pi(Rational(-3, 32)));
}

TEST_CASE("reduction: m = 1 is the identity") {
  std::mt19937 rng(3);
  const ReductionShape shape{2, 1, 1};
  const auto table = random_table(rng, 1, 3);
  const MelnikovCombination c = combination_from_table(Family::SmoothOdd, shape, table);
  const CanonicalForm canon = reduce_to_canonical(c, shape);
  CHECK(canon.A.size() == 3);
  for (int i = 0; i <= 2; ++i) CHECK(canon.A[static_cast<size_t>(i)] == table[0][static_cast<size_t>(i)]);
}

TEST_CASE("reduction map matches the m = 2 closed form") {
  // n = 1, r = 0: A0 = c00; A1 = c10 + 6 c01; A2 = -c01 + 2 c11;
  // A3 = c01/3 + c11/3, inputs ordered (c00, c10, c01, c11).
  const CanonicalForm canon = reduce_to_canonical(
      combination_from_table(Family::SmoothOdd, {1, 2, 0},
                             {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}),
      {1, 2, 0});
  const QMatrix expected = {
      {Rational(1), Rational(0), Rational(0), Rational(0)},
      {Rational(0), Rational(1), Rational(6), Rational(0)},
      {Rational(0), Rational(0), Rational(-1), Rational(2)},
      {Rational(0), Rational(0), Rational(1, 3), Rational(1, 3)}};
  CHECK(canon.input_map == expected);

  // Piecewise analogue (l = 2, r_tilde = 1): A1 = c10 + 8 c01;
  // A2 = -(4/3) c01 + (8/3) c11; A3 = c01/3 + c11/3.
  const CanonicalForm canon_p = reduce_to_canonical(
      combination_from_table(Family::PiecewiseHalf, {1, 2, 1},
                             {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}),
      {1, 2, 1});
  const QMatrix expected_p = {
      {Rational(1), Rational(0), Rational(0), Rational(0)},
      {Rational(0), Rational(1), Rational(8), Rational(0)},
      {Rational(0), Rational(0), Rational(-4, 3), Rational(8, 3)},
      {Rational(0), Rational(0), Rational(1, 3), Rational(1, 3)}};
  CHECK(canon_p.input_map == expected_p);
}

TEST_CASE("reduction preserves the series exactly") {
  std::mt19937 rng(17);
  for (int n = 0; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int r = 0; r <= 1; ++r)
        for (int rep = 0; rep < 5; ++rep) {
          const ReductionShape shape{n, m, r};
          const MelnikovCombination c =
              combination_from_table(Family::SmoothOdd, shape, random_table(rng, m, n + 1));
          if (c.empty()) continue;
          const CanonicalForm canon = reduce_to_canonical(c, shape);
          const int cap = min_base_half(c) + 30;
          CHECK((expand_to_cap(c, cap) - expand_to_cap(canon.as_combination(), cap))
                    .vanishes_through(cap));

          const ReductionShape pshape{n, m, r + 1};
          const MelnikovCombination cp = combination_from_table(Family::PiecewiseHalf, pshape,
                                                                random_table(rng, m, n + 1));
          if (cp.empty()) continue;
          const CanonicalForm canon_p = reduce_to_canonical(cp, pshape);
          const int capp = min_base_half(cp) + 30;
          CHECK((expand_to_cap(cp, capp) - expand_to_cap(canon_p.as_combination(), capp))
                    .vanishes_through(capp));
        }
}

TEST_CASE("canonical map is surjective for n >= 1") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 2; m <= 3; ++m) {
      std::vector<std::vector<Rational>> unit(static_cast<size_t>(m),
                                              std::vector<Rational>(static_cast<size_t>(n + 1), Rational(0)));
      unit[0][0] = 1;
      const ReductionShape shape{n, m, 0};
      const CanonicalForm canon = reduce_to_canonical(
          combination_from_table(Family::SmoothOdd, shape, unit), shape);
      CHECK(rank_bareiss(canon.input_map) == n + 2 * m - 1);

      const ReductionShape pshape{n, m, 1};
      const CanonicalForm pcanon = reduce_to_canonical(
          combination_from_table(Family::PiecewiseHalf, pshape, unit), pshape);
      CHECK(rank_bareiss(pcanon.input_map) == n + 2 * m - 1);
    }
}

TEST_CASE("expansion of a perturbation agrees with direct quadrature") {
  // Smooth, with sin-parts and even powers that must drop out.
  SmoothPerturbation p;
  p.n = 2;
  p.s1 = 1;
  p.s2 = 4;
  p.q.resize(4);
  p.q[0].a = {Rational(1), Rational(-1, 2), Rational(1, 3)};
  p.q[0].a_tilde = {Rational(2), Rational(1)};
  p.q[1].a = {Rational(1), Rational(1), Rational(1)};
  p.q[2].a = {Rational(0), Rational(2, 5), Rational(-1)};
  p.q[2].a_tilde = {Rational(0), Rational(3)};
  p.q[3].a = {Rational(1, 7), Rational(0), Rational(4)};
  const MelnikovCombination comb = assemble_smooth(p);
  const HalfPowerSeries series = expand(comb, 25);
  for (double h : {0.01, 0.05}) {
    const double via_series = series.eval_precise(rational_from_double(h));
    const double via_quad = quad_melnikov(p, EnergyLevel(h), 1e-12).value;
    CHECK(std::fabs(via_series - via_quad) / std::fabs(via_quad) < 1e-6);
  }

  // Piecewise with distinct sides and ranges.
  PiecewisePerturbation pp;
  pp.n = 1;
  pp.s1 = 1;
  pp.s2 = 2;
  pp.s3 = 3;
  pp.plus.resize(2);
  pp.minus.resize(3);
  pp.plus[0].a = {Rational(1), Rational(1, 2)};
  pp.plus[1].a = {Rational(-1), Rational(1)};
  pp.minus[0].a = {Rational(1, 3), Rational(0)};
  pp.minus[0].a_tilde = {Rational(1)};
  pp.minus[1].a = {Rational(2), Rational(-1, 2)};
  pp.minus[2].a = {Rational(1), Rational(1)};
  const MelnikovCombination combp = assemble_piecewise(pp);
  const HalfPowerSeries seriesp = expand(combp, 25);
  for (double h : {0.01, 0.05}) {
    const double via_series = seriesp.eval_precise(rational_from_double(h));
    const double via_quad = quad_melnikov(pp, EnergyLevel(h), 1e-12).value;
    CHECK(std::fabs(via_series - via_quad) / std::fabs(via_quad) < 1e-6);
  }
}

TEST_CASE("degenerate combinations expand to the explicit zero marker") {
  SmoothPerturbation p;
  p.n = 0;
  p.s1 = 2;
  p.s2 = 2;
  p.q.resize(1);
  p.q[0].a = {Rational(7)};
  const MelnikovCombination c = assemble_smooth(p);
  CHECK(c.empty());
  CHECK(expand_to_cap(c, 20).identically_zero());
}

TEST_CASE("perturbation JSON round trip and diagnostics") {
  const nlohmann::json doc = nlohmann::json::parse(R"({
      "kind": "smooth", "n": 1, "s1": 1, "s2": 2,
      "a": [["1", "-1/2"], ["0", "2/3"]], "a_tilde": [["1/4", "0"]]})");
  const Perturbation p = perturbation_from_json(doc);
  const Perturbation q = perturbation_from_json(perturbation_to_json(p));
  CHECK(perturbation_to_json(p) == perturbation_to_json(q));

  nlohmann::json bad_rows = doc;
  bad_rows["a"].push_back(nlohmann::json::array({"1", "1"}));  // i > n
  CHECK_THROWS_AS(perturbation_from_json(bad_rows), std::invalid_argument);

  const nlohmann::json no_s3 = nlohmann::json::parse(R"({
      "kind": "piecewise", "n": 0, "s1": 1, "s2": 1,
      "plus": {"a": [["1"]]}, "minus": {"a": [["1"]]}})");
  CHECK_THROWS_WITH_AS(perturbation_from_json(no_s3), "perturbation: s3 required",
                       std::invalid_argument);

  const nlohmann::json w_basis = nlohmann::json::parse(R"({
      "kind": "smooth", "n": 1, "s1": 1, "s2": 1,
      "basis": "one_minus_cos", "a": [["0"], ["1"]]})");
  const Perturbation converted = perturbation_from_json(w_basis);
  const auto& sp = std::get<SmoothPerturbation>(converted);
  CHECK(sp.q[0].a == std::vector<Rational>{Rational(1), Rational(-1)});
}
