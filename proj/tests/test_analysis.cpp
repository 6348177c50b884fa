#include <doctest.h>

#include <cmath>
#include <random>

#include "melkit/ranks.hpp"
#include "melkit/zeros.hpp"

using namespace melkit;

TEST_CASE("zero-count bounds reproduce the theorem cases") {
  CHECK(max_zero_bound({Family::SmoothOdd, 0, 3}) == 2);
  CHECK(max_zero_bound({Family::SmoothOdd, 1, 2}) == 3);
  CHECK(max_zero_bound({Family::SmoothOdd, 4, 1}) == 4);
  BoundQuery pw;
  pw.family = Family::PiecewiseHalf;
  pw.n = 0;
  pw.s1 = 1;
  pw.s_hat = 4;
  CHECK(max_zero_bound(pw) == 3);
  pw.n = 3;
  pw.s_hat = 1;
  CHECK(max_zero_bound(pw) == 3);
  pw.n = 1;
  pw.s_hat = 2;
  CHECK(max_zero_bound(pw) == 3);
  pw.s1 = 2;
  pw.s_hat = 5;
  pw.n = 2;
  CHECK(max_zero_bound(pw) == 2 * (2 + 3) - 1);
}

TEST_CASE("D-matrix ranks, both routes") {
  const RankReport base = rank_D_smooth(1, 3, 0);
  CHECK(base.computed_rank == 2);
  CHECK(base.recursion_checked);
  CHECK(base.match);

  CHECK(rank_D_smooth(2, 2, 1).computed_rank == 1);  // 1x1 case
  CHECK(rank_D_piecewise(1, 3, 1).computed_rank == 2);
  CHECK(rank_D_piecewise(3, 2, 2).computed_rank == 1);

  for (int n = 1; n <= 3; ++n)
    for (int m = 2; m <= 5; ++m) {
      CHECK(rank_D_smooth(n, m, 1).match);
      CHECK(rank_D_piecewise(n, m, 2).match);
    }
}

TEST_CASE("jacobian structure and rank") {
  const RankReport m1 = jacobian_rank(Family::SmoothOdd, 2, 1, 0);
  CHECK(m1.computed_rank == 3);
  CHECK(m1.lower_triangular);
  CHECK(m1.diagonal_nonzero);
  CHECK(m1.match);

  const RankReport m2 = jacobian_rank(Family::SmoothOdd, 1, 2, 0);
  CHECK(m2.computed_rank == 4);
  CHECK(m2.lower_triangular);
  CHECK(m2.match);

  const RankReport l1 = jacobian_rank(Family::PiecewiseHalf, 1, 1, 1);
  CHECK(l1.computed_rank == 2);
  CHECK(l1.lower_triangular);
  CHECK(l1.match);

  const RankReport l2 = jacobian_rank(Family::PiecewiseHalf, 1, 2, 1);
  CHECK(l2.computed_rank == 4);
  CHECK(l2.match);

  // m >= 3: the tail block is dense, the matrix is block lower
  // triangular with the D-block carrying the tail rank.
  const RankReport m3 = jacobian_rank(Family::SmoothOdd, 2, 3, 1);
  CHECK(m3.computed_rank == 2 + 2 * 3 - 1);
  CHECK(m3.block_structure_ok);
  CHECK(m3.match);
}

TEST_CASE("jacobian tail block is the row-scaled D matrix") {
  const int n = 2, m = 3, r = 1;
  const RankReport jac = jacobian_rank(Family::SmoothOdd, n, m, r);
  for (int kappa = 0; kappa <= m - 2; ++kappa)
    for (int t = 1; t <= m - 1; ++t) {
      const Rational entry =
          jac.normalized[static_cast<size_t>(n + m + kappa)][static_cast<size_t>(n + m - 1 + t)];
      const Rational expected = -(Rational(2 * kappa + 1, 2)) * tilde_b(kappa) *
                                b_coeff(n + t, r + m - t, kappa).pi_part;
      CHECK(entry == expected);
    }
}

TEST_CASE("vanishing condition: kernel of the truncated map kills the series") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int n = 1; n <= 2; ++n)
    for (int m = 2; m <= 3; ++m) {
      const ReductionShape shape{n, m, 0};
      const int bound = n + 2 * m - 2;
      const QMatrix map = coefficient_map(Family::SmoothOdd, shape, bound);
      const auto kernel = kernel_basis(map);
      CHECK(kernel.size() == static_cast<size_t>(m * (n + 1) - (bound + 1)));
      for (int rep = 0; rep < 5 && !kernel.empty(); ++rep) {
        std::vector<Rational> combo(kernel[0].size(), Rational(0));
        for (const auto& basis_vec : kernel) {
          const Rational weight(num(rng), 1 + std::abs(num(rng)));
          for (size_t c = 0; c < combo.size(); ++c) combo[c] += weight * basis_vec[c];
        }
        std::vector<std::vector<Rational>> table(static_cast<size_t>(m),
                                                 std::vector<Rational>(static_cast<size_t>(n + 1)));
        for (int jj = 0; jj < m; ++jj)
          for (int i = 0; i <= n; ++i)
            table[static_cast<size_t>(jj)][static_cast<size_t>(i)] =
                combo[static_cast<size_t>(jj * (n + 1) + i)];
        const MelnikovCombination comb =
            combination_from_table(Family::SmoothOdd, shape, table);
        const int cap = 2 * (0 + 1) + 2 * (bound + 10);
        CHECK(expand_to_cap(comb, cap).vanishes_through(cap));
      }
    }
}

TEST_CASE("count_sign_changes on one-signed evaluators") {
  const auto positive = [](double h) { return quad_I(0, 1, EnergyLevel(h), 1e-10); };
  const SignCountResult none = count_sign_changes(positive, 0.01, 1.0, 16);
  CHECK(none.changes == 0);
  CHECK(none.warnings.empty());

  const auto damping = [](double h) {
    QuadResult r = quad_I(0, 1, EnergyLevel(h), 1e-10);
    r.value = -r.value;
    return r;
  };
  CHECK(count_sign_changes(damping, 0.01, 1.0, 16).changes == 0);
}

TEST_CASE("realization input validation") {
  BoundQuery q{Family::SmoothOdd, 1, 2};
  CHECK_THROWS_AS(realize_zeros(q, {0.1}), std::invalid_argument);          // wrong count
  CHECK_THROWS_AS(realize_zeros(q, {0.1, 0.1, 0.1}), std::invalid_argument);  // repeats
  CHECK_THROWS_AS(realize_zeros(q, {0.1, 0.2, 0.5}), std::invalid_argument);  // above 0.2
}

TEST_CASE("single-zero realization, smooth n = 0, m = 2") {
  BoundQuery q{Family::SmoothOdd, 0, 2};
  const Realization real = realize_zeros(q, {0.05});
  CHECK(real.verified);
  REQUIRE(real.validation.brackets.size() == 1);
  const SignChange& z = real.validation.brackets[0];
  CHECK(std::fabs(z.root - 0.05) < 0.005);
  CHECK((z.hi - z.lo) <= 1e-6 * z.root * 1.01);
  CHECK(real.eps0 == doctest::Approx(0.1));
}

TEST_CASE("clustered locations fail the margin check with a diagnostic") {
  BoundQuery q{Family::SmoothOdd, 1, 2};
  const Realization real = realize_zeros(q, {0.1991, 0.1995, 0.1999});
  CHECK(!real.verified);
  CHECK(!real.diagnostic.empty());
}
