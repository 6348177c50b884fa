#ifndef MELKIT_MELNIKOV_HPP
#define MELKIT_MELNIKOV_HPP

#include <compare>
#include <map>
#include <utility>
#include <vector>

#include "melkit/perturbation.hpp"
#include "melkit/series.hpp"

namespace melkit {

/** Basis elements of the Melnikov algebra.
 *    I_{i,j}  : oint (1-cos x)^i y^j dx, j odd
 *    J_{i,j}  : the upper-half-orbit integral, any j >= 1
 *    L_{i,q}  : (i+1) I_{i+1,2q+1} - (2q+1) I_{i+2,2q-1},   q >= 1
 *    Lt_{i,j} : (i+1) J_{i+1,2j+2} - (2j+2) J_{i+2,2j},     j >= 1 */
enum class BasisKind { I, J, L, Lt };

struct BasisTerm {
  BasisKind kind;
  int i;
  int j;
  auto operator<=>(const BasisTerm&) const = default;
};

std::string basis_term_name(const BasisTerm& t);

enum class Family { SmoothOdd, PiecewiseHalf };

/** Rational-linear combination over the basis. */
struct MelnikovCombination {
  Family family = Family::SmoothOdd;
  std::map<BasisTerm, Rational> terms;

  void add(const BasisTerm& t, const Rational& coeff);
  bool empty() const { return terms.empty(); }
};

/** M(h) of a smooth perturbation after the orbit-symmetry reductions:
 *  even y-powers and odd trig parts drop, the even parts move to the
 *  (1-cos x)^i basis, leaving only I_{i,2j+1} with j in [r, r+m-1],
 *  r = floor(s1/2), m = floor((s2-2r+1)/2). */
MelnikovCombination assemble_smooth(const SmoothPerturbation& p);

/** Mtilde(h) of a piecewise perturbation: J_{i,s} terms over s in
 *  [s1, s_hat] built from the even part of Q+_{n,s} + (-1)^{s+1} Q-_{n,s}
 *  (the out-of-range side reads as zero). */
MelnikovCombination assemble_piecewise(const PiecewisePerturbation& p);

/** Splits a piecewise combination into the odd-power part rewritten over
 *  I (using J_{i,2r+1} = I_{i,2r+1}/2) and the even-power J part. */
std::pair<MelnikovCombination, MelnikovCombination> split_piecewise(
    const MelnikovCombination& c);

/** One rewrite identity: lhs = sum coeff * term. */
struct LinearRelation {
  BasisTerm lhs;
  std::vector<std::pair<BasisTerm, Rational>> rhs;
};

/** I_{i,2r+3} through {I_{i+1,2r+1}, ..., I_{i+k+2,2r+1}, I_{i+k+1,2r+3}}
 *  with the chain coefficients c_{i,j}, e_{i,k}; k = 0 is the single-step
 *  identity. */
LinearRelation rewrite_I(int i, int r, int k);

/** Even-power analogue expressing J_{i,2r+2}; requires r >= 1. */
LinearRelation rewrite_J(int i, int r, int k);

/** Applies lhs -> rhs to the combination (no-op when lhs is absent). */
void apply_rewrite(MelnikovCombination& c, const LinearRelation& rel);

struct ReductionShape {
  int n = 0;
  int m = 1;  // number of ladder levels (m or l)
  int r = 0;  // lowest level index (r or r_tilde)
};

/** Reduced representation
 *    sum_{i=0}^{n+m-1} A_i I_{i,2r+1} + sum_{t=1}^{m-1} A_{n+m-1+t} L_{n-1+t,r+m-t}
 *  (J / Lt for the piecewise family, with r_tilde and l in place of r, m).
 *  input_map is the exact linear map from the m(n+1) input coefficients,
 *  ordered (level - r)*(n+1) + i, to the A vector. */
struct CanonicalForm {
  Family family = Family::SmoothOdd;
  ReductionShape shape;
  std::vector<Rational> A;                      // size n + 2m - 1
  std::vector<std::vector<Rational>> input_map; // (n+2m-1) x (m(n+1))

  MelnikovCombination as_combination() const;
};

/** Constructive reduction following the elimination order of the proofs:
 *  levels are cleared top-down; each level first applies the maximal
 *  chain rewrites for i <= n-2, then single-step sweeps that push the
 *  remaining terms up to the canonical top tier, where the L (Lt) tail
 *  element is split off. Exact; the result expands to the same series as
 *  the input at every order. */
CanonicalForm reduce_to_canonical(const MelnikovCombination& c, const ReductionShape& shape);

/** Shape inferred from the combination (n = max i, r = lowest level). */
CanonicalForm reduce_to_canonical(const MelnikovCombination& c);

/** Builders used by tests and the realization pipeline: coefficient
 *  tables are indexed [level - r][i]. */
MelnikovCombination combination_from_table(Family family, const ReductionShape& shape,
                                           const std::vector<std::vector<Rational>>& table);

/** Exact series of a single basis element, complete through the
 *  half-exponent cap. */
HalfPowerSeries term_series(const BasisTerm& t, int cap_half);

/** Exact series of a combination, complete through cap_half. The empty
 *  combination yields the identically-zero marker. */
HalfPowerSeries expand_to_cap(const MelnikovCombination& c, int cap_half);

/** Series with `order` ladder steps from the combination's leading
 *  half-exponent. */
HalfPowerSeries expand(const MelnikovCombination& c, int order);

/** Smallest half-exponent that can carry a nonzero coefficient. */
int min_base_half(const MelnikovCombination& c);

}  // namespace melkit

#endif
