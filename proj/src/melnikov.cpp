#include "melkit/melnikov.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "melkit/exact_coeff.hpp"

namespace melkit {

std::string basis_term_name(const BasisTerm& t) {
  const char* names[] = {"I", "J", "L", "Lt"};
  return std::string(names[static_cast<int>(t.kind)]) + "_{" + std::to_string(t.i) +
         "," + std::to_string(t.j) + "}";
}

void MelnikovCombination::add(const BasisTerm& t, const Rational& coeff) {
  if (coeff == 0) return;
  auto it = terms.find(t);
  if (it == terms.end()) {
    terms.emplace(t, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0) terms.erase(it);
}

MelnikovCombination assemble_smooth(const SmoothPerturbation& p) {
  p.validate();
  MelnikovCombination out;
  out.family = Family::SmoothOdd;
  const int r = p.s1 / 2;
  const int m = (p.s2 - 2 * r + 1) / 2;
  for (int jj = 0; jj < m; ++jj) {
    const int s = 2 * (r + jj) + 1;
    const CosBasisPoly even = even_part_to_cos_basis(p.at_power(s));
    for (size_t i = 0; i < even.ctilde.size(); ++i)
      out.add({BasisKind::I, static_cast<int>(i), s}, even.ctilde[i]);
  }
  return out;
}

MelnikovCombination assemble_piecewise(const PiecewisePerturbation& p) {
  p.validate();
  MelnikovCombination out;
  out.family = Family::PiecewiseHalf;
  for (int s = p.s1; s <= p.s_hat(); ++s) {
    // Even part of Q+_{n,s} + (-1)^{s+1} Q-_{n,s}; the reversed lower
    // arc contributes the (-1)^{s+1} factor.
    TrigPoly combined;
    combined.a.assign(static_cast<size_t>(p.n + 1), Rational(0));
    const int sign = (s % 2 == 0) ? -1 : 1;
    if (s <= p.s2) {
      const auto& qp = p.plus[static_cast<size_t>(s - p.s1)];
      for (size_t i = 0; i < qp.a.size(); ++i) combined.a[i] += qp.a[i];
    }
    if (s <= p.s3) {
      const auto& qm = p.minus[static_cast<size_t>(s - p.s1)];
      for (size_t i = 0; i < qm.a.size(); ++i)
        combined.a[i] += (sign > 0 ? qm.a[i] : -qm.a[i]);
    }
    const CosBasisPoly even = even_part_to_cos_basis(combined);
    for (size_t i = 0; i < even.ctilde.size(); ++i)
      out.add({BasisKind::J, static_cast<int>(i), s}, even.ctilde[i]);
  }
  return out;
}

std::pair<MelnikovCombination, MelnikovCombination> split_piecewise(
    const MelnikovCombination& c) {
  if (c.family != Family::PiecewiseHalf)
    throw std::invalid_argument("split_piecewise: not a piecewise combination");
  MelnikovCombination odd, even;
  odd.family = Family::SmoothOdd;
  even.family = Family::PiecewiseHalf;
  for (const auto& [t, coeff] : c.terms) {
    if (t.kind != BasisKind::J)
      throw std::invalid_argument("split_piecewise: expected a pure J combination");
    if (t.j % 2 == 1)
      odd.add({BasisKind::I, t.i, t.j}, coeff / 2);
    else
      even.add(t, coeff);
  }
  return {odd, even};
}

LinearRelation rewrite_I(int i, int r, int k) {
  if (i < 0 || r < 0 || k < 0) throw std::invalid_argument("rewrite_I: negative index");
  LinearRelation rel;
  rel.lhs = {BasisKind::I, i, 2 * r + 3};
  const Rational p(2 * r + 3);
  rel.rhs.emplace_back(BasisTerm{BasisKind::I, i + 1, 2 * r + 1},
                       2 * p / Rational(2 * i + 1));
  for (int jj = 0; jj < k; ++jj) {
    const auto [c_ij, e_ij] = zb_chain_coeffs(i, jj);
    rel.rhs.emplace_back(BasisTerm{BasisKind::I, i + jj + 2, 2 * r + 1}, -p * c_ij);
  }
  const auto [c_ik, e_ik] = zb_chain_coeffs(i, k);
  rel.rhs.emplace_back(BasisTerm{BasisKind::I, i + k + 1, 2 * r + 3},
                       e_ik * Rational(i + k + 1));
  rel.rhs.emplace_back(BasisTerm{BasisKind::I, i + k + 2, 2 * r + 1}, -e_ik * p);
  return rel;
}

LinearRelation rewrite_J(int i, int r, int k) {
  if (i < 0 || k < 0) throw std::invalid_argument("rewrite_J: negative index");
  if (r < 1) throw std::invalid_argument("rewrite_J: requires r >= 1");
  LinearRelation rel;
  rel.lhs = {BasisKind::J, i, 2 * r + 2};
  const Rational p(2 * r + 2);
  rel.rhs.emplace_back(BasisTerm{BasisKind::J, i + 1, 2 * r},
                       2 * p / Rational(2 * i + 1));
  for (int jj = 0; jj < k; ++jj) {
    const auto [c_ij, e_ij] = zb_chain_coeffs(i, jj);
    rel.rhs.emplace_back(BasisTerm{BasisKind::J, i + jj + 2, 2 * r}, -p * c_ij);
  }
  const auto [c_ik, e_ik] = zb_chain_coeffs(i, k);
  rel.rhs.emplace_back(BasisTerm{BasisKind::J, i + k + 1, 2 * r + 2},
                       e_ik * Rational(i + k + 1));
  rel.rhs.emplace_back(BasisTerm{BasisKind::J, i + k + 2, 2 * r}, -e_ik * p);
  return rel;
}

void apply_rewrite(MelnikovCombination& c, const LinearRelation& rel) {
  auto it = c.terms.find(rel.lhs);
  if (it == c.terms.end()) return;
  const Rational gamma = it->second;
  c.terms.erase(it);
  for (const auto& [t, coeff] : rel.rhs) c.add(t, gamma * coeff);
}

namespace {

/** Shared ladder bookkeeping for the two reductions. Levels are the
 *  second-index tiers: power 2*level+1 on the I ladder, 2*level on the
 *  J ladder. */
struct LadderTraits {
  BasisKind base;
  BasisKind tail;
  int offset;        // power(level) = 2*level + offset
  int tail_j_shift;  // tail index produced when folding level j

  int power(int level) const { return 2 * level + offset; }
  int level_of(int power) const { return (power - offset) / 2; }
  LinearRelation rewrite(int i, int target_level, int k) const {
    return base == BasisKind::I ? rewrite_I(i, target_level, k)
                                : rewrite_J(i, target_level, k);
  }
};

constexpr LadderTraits kSmoothLadder{BasisKind::I, BasisKind::L, 1, 0};
constexpr LadderTraits kPiecewiseLadder{BasisKind::J, BasisKind::Lt, 0, -1};

std::vector<int> tiers_at_level(const MelnikovCombination& c, const LadderTraits& lt,
                                int level) {
  std::vector<int> tiers;
  for (const auto& [t, coeff] : c.terms)
    if (t.kind == lt.base && t.j == lt.power(level)) tiers.push_back(t.i);
  return tiers;
}

void validate_ladder_input(const MelnikovCombination& c, const LadderTraits& lt,
                           const ReductionShape& shape) {
  if (shape.m < 1 || shape.n < 0 || shape.r < 0)
    throw std::invalid_argument("reduce_to_canonical: invalid shape");
  if (lt.base == BasisKind::J && shape.r < 1)
    throw std::invalid_argument("reduce_to_canonical: piecewise ladder needs r_tilde >= 1");
  for (const auto& [t, coeff] : c.terms) {
    if (t.kind != lt.base)
      throw std::invalid_argument("reduce_to_canonical: mixed basis kinds in input");
    if ((t.j - lt.offset) % 2 != 0)
      throw std::invalid_argument("reduce_to_canonical: wrong power parity for family");
    const int level = lt.level_of(t.j);
    if (level < shape.r || level > shape.r + shape.m - 1)
      throw std::invalid_argument("reduce_to_canonical: power outside declared ladder");
    if (t.i < 0 || t.i > shape.n)
      throw std::invalid_argument("reduce_to_canonical: trig degree above declared n");
  }
}

/** Eliminates every level above shape.r, in the proof's order. */
std::vector<Rational> reduce_core(MelnikovCombination work, const LadderTraits& lt,
                                  const ReductionShape& shape) {
  const int n = shape.n, m = shape.m, r = shape.r;
  for (int level = r + m - 1; level >= r + 1; --level) {
    const int target = level - 1;
    // Maximal chains clear tiers i <= n-2 in one application each.
    for (int i = 0; i + 2 <= n; ++i)
      apply_rewrite(work, lt.rewrite(i, target, n - 2 - i));
    // Single-step sweep toward the canonical top tier of this level.
    const int top = n + (r + m - 1 - level);
    while (true) {
      std::vector<int> tiers = tiers_at_level(work, lt, level);
      if (tiers.empty()) break;
      const int lo = *std::min_element(tiers.begin(), tiers.end());
      if (lo > top)
        throw std::logic_error("reduce_to_canonical: tier above the canonical top");
      if (lo < top) {
        apply_rewrite(work, lt.rewrite(lo, target, 0));
        continue;
      }
      // Only the top tier remains: split off the tail element.
      const BasisTerm lhs{lt.base, top, lt.power(level)};
      const Rational gamma = work.terms.at(lhs);
      work.terms.erase(lhs);
      const Rational denom(2 * top + 1);
      work.add({lt.base, top + 1, lt.power(target)},
               gamma * Rational(2 * lt.power(level)) / denom);
      work.add({lt.tail, top, level + lt.tail_j_shift}, gamma / denom);
      break;
    }
  }

  // Collect A: head on the base ladder at level r, then the tail.
  std::vector<Rational> A(static_cast<size_t>(n + 2 * m - 1), Rational(0));
  for (const auto& [t, coeff] : work.terms) {
    if (t.kind == lt.base && t.j == lt.power(r) && t.i <= n + m - 1) {
      A[static_cast<size_t>(t.i)] = coeff;
      continue;
    }
    if (t.kind == lt.tail) {
      // Tail element (n-1+t, r+m-t [+shift]) maps to slot n+m-1+t.
      const int tt = t.i - (n - 1);
      if (tt >= 1 && tt <= m - 1 && t.j == r + m - tt + lt.tail_j_shift) {
        A[static_cast<size_t>(n + m - 1 + tt)] = coeff;
        continue;
      }
    }
    throw std::logic_error("reduce_to_canonical: unexpected residual term " +
                           basis_term_name(t));
  }
  return A;
}

}  // namespace

MelnikovCombination combination_from_table(Family family, const ReductionShape& shape,
                                           const std::vector<std::vector<Rational>>& table) {
  const LadderTraits& lt = family == Family::SmoothOdd ? kSmoothLadder : kPiecewiseLadder;
  if (family == Family::PiecewiseHalf && shape.r < 1)
    throw std::invalid_argument("combination_from_table: even ladder starts at r_tilde >= 1");
  if (table.size() != static_cast<size_t>(shape.m))
    throw std::invalid_argument("combination_from_table: need one row per level");
  MelnikovCombination out;
  out.family = family;
  for (int jj = 0; jj < shape.m; ++jj) {
    const auto& row = table[static_cast<size_t>(jj)];
    if (row.size() != static_cast<size_t>(shape.n + 1))
      throw std::invalid_argument("combination_from_table: need n+1 coefficients per level");
    for (int i = 0; i <= shape.n; ++i)
      out.add({lt.base, i, lt.power(shape.r + jj)}, row[static_cast<size_t>(i)]);
  }
  return out;
}

MelnikovCombination CanonicalForm::as_combination() const {
  const LadderTraits& lt =
      family == Family::SmoothOdd ? kSmoothLadder : kPiecewiseLadder;
  const int n = shape.n, m = shape.m, r = shape.r;
  MelnikovCombination out;
  out.family = family;
  for (int i = 0; i <= n + m - 1; ++i)
    out.add({lt.base, i, lt.power(r)}, A[static_cast<size_t>(i)]);
  for (int tt = 1; tt <= m - 1; ++tt)
    out.add({lt.tail, n - 1 + tt, r + m - tt + lt.tail_j_shift},
            A[static_cast<size_t>(n + m - 1 + tt)]);
  return out;
}

CanonicalForm reduce_to_canonical(const MelnikovCombination& c, const ReductionShape& shape) {
  const LadderTraits& lt =
      c.family == Family::SmoothOdd ? kSmoothLadder : kPiecewiseLadder;
  validate_ladder_input(c, lt, shape);

  CanonicalForm out;
  out.family = c.family;
  out.shape = shape;
  out.A = reduce_core(c, lt, shape);

  // Exact linear map, one unit-vector reduction per input slot.
  const int cols = shape.m * (shape.n + 1);
  out.input_map.assign(out.A.size(), std::vector<Rational>(static_cast<size_t>(cols), Rational(0)));
  for (int jj = 0; jj < shape.m; ++jj)
    for (int i = 0; i <= shape.n; ++i) {
      MelnikovCombination unit;
      unit.family = c.family;
      unit.add({lt.base, i, lt.power(shape.r + jj)}, Rational(1));
      const std::vector<Rational> col = reduce_core(std::move(unit), lt, shape);
      const int col_index = jj * (shape.n + 1) + i;
      for (size_t row = 0; row < col.size(); ++row)
        out.input_map[row][static_cast<size_t>(col_index)] = col[row];
    }
  return out;
}

CanonicalForm reduce_to_canonical(const MelnikovCombination& c) {
  if (c.empty())
    throw std::invalid_argument("reduce_to_canonical: empty combination");
  const LadderTraits& lt =
      c.family == Family::SmoothOdd ? kSmoothLadder : kPiecewiseLadder;
  ReductionShape shape;
  shape.n = 0;
  int lo = -1, hi = -1;
  for (const auto& [t, coeff] : c.terms) {
    shape.n = std::max(shape.n, t.i);
    const int level = lt.level_of(t.j);
    lo = lo < 0 ? level : std::min(lo, level);
    hi = std::max(hi, level);
  }
  shape.r = lo;
  shape.m = hi - lo + 1;
  return reduce_to_canonical(c, shape);
}

HalfPowerSeries term_series(const BasisTerm& t, int cap_half) {
  int base = 0;
  Rational factor(1);
  std::function<ExactCoeff(long)> coeff_at;
  switch (t.kind) {
    case BasisKind::I:
    case BasisKind::J: {
      if (t.j < 1) throw std::invalid_argument("term_series: power must be >= 1");
      if (t.j % 2 == 1) {
        const int q = (t.j - 1) / 2;
        base = 2 * (t.i + q + 1);
        if (t.kind == BasisKind::J) factor = Rational(1, 2);
        coeff_at = [i = t.i, q](long k) { return tilde_b(k) * b_coeff(i, q, k); };
      } else {
        if (t.kind == BasisKind::I)
          throw std::invalid_argument("term_series: I requires an odd power");
        const int q = t.j / 2;
        base = 2 * (t.i + q) + 1;
        coeff_at = [i = t.i, q](long k) { return tilde_b(k) * c_coeff(i, q, k); };
      }
      break;
    }
    case BasisKind::L: {
      if (t.j < 1) throw std::invalid_argument("term_series: L requires q >= 1");
      base = 2 * (t.i + t.j + 2);
      coeff_at = [i = t.i, q = t.j](long k) {
        return -(Rational(2 * k + 1, 2) * tilde_b(k)) * b_coeff(i + 1, q, k);
      };
      break;
    }
    case BasisKind::Lt: {
      if (t.j < 1) throw std::invalid_argument("term_series: Lt requires j >= 1");
      base = 2 * (t.i + t.j) + 5;
      coeff_at = [i = t.i, j = t.j](long k) {
        return -(Rational(2 * k + 1, 2) * tilde_b(k)) * c_coeff(i + 1, j + 1, k);
      };
      break;
    }
  }
  if (cap_half < base) return HalfPowerSeries(cap_half + 1, {});
  std::vector<ExactCoeff> coeffs(static_cast<size_t>(cap_half - base + 1));
  for (long k = 0; base + 2 * k <= cap_half; ++k)
    coeffs[static_cast<size_t>(2 * k)] = coeff_at(k) * factor;
  return HalfPowerSeries(base, std::move(coeffs));
}

HalfPowerSeries expand_to_cap(const MelnikovCombination& c, int cap_half) {
  if (c.empty()) return HalfPowerSeries::zero();
  HalfPowerSeries acc = HalfPowerSeries::zero();
  for (const auto& [t, coeff] : c.terms)
    acc += term_series(t, cap_half).scaled(coeff);
  return acc;
}

int min_base_half(const MelnikovCombination& c) {
  int best = std::numeric_limits<int>::max();
  for (const auto& [t, coeff] : c.terms) {
    int base = 0;
    switch (t.kind) {
      case BasisKind::I:
        base = 2 * (t.i + (t.j - 1) / 2 + 1);
        break;
      case BasisKind::J:
        base = t.j % 2 == 1 ? 2 * (t.i + (t.j - 1) / 2 + 1) : 2 * (t.i + t.j / 2) + 1;
        break;
      case BasisKind::L:
        base = 2 * (t.i + t.j + 2);
        break;
      case BasisKind::Lt:
        base = 2 * (t.i + t.j) + 5;
        break;
    }
    best = std::min(best, base);
  }
  return best;
}

HalfPowerSeries expand(const MelnikovCombination& c, int order) {
  if (order < 1) throw std::invalid_argument("expand: order must be >= 1");
  if (c.empty()) return HalfPowerSeries::zero();
  return expand_to_cap(c, min_base_half(c) + 2 * (order - 1));
}

}  // namespace melkit
