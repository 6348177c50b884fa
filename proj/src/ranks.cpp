#include "melkit/ranks.hpp"

#include <stdexcept>

#include "melkit/exact_coeff.hpp"

namespace melkit {

nlohmann::json RankReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["name"] = name;
  j["rows"] = rows;
  j["cols"] = cols;
  j["computed_rank"] = computed_rank;
  j["expected_rank"] = expected_rank;
  j["match"] = match;
  j["recursion_checked"] = recursion_checked;
  j["lower_triangular"] = lower_triangular;
  j["block_structure_ok"] = block_structure_ok;
  j["diagonal_nonzero"] = diagonal_nonzero;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : normalized) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& q : row) r.push_back(to_string(q));
    rows_json.push_back(r);
  }
  j["entries"] = rows_json;
  j["trace"] = trace;
  return j;
}

namespace {

/** The normalized matrix shared by both families ((d3)/(g3) shape):
 *  entry(k, t) = prod_{u=0}^{k-1} (n + u + q + 1/2), column q = t+1. */
QMatrix normalized_D(int n, int size) {
  QMatrix d(static_cast<size_t>(size), std::vector<Rational>(static_cast<size_t>(size)));
  for (int k = 0; k < size; ++k)
    for (int t = 0; t < size; ++t) {
      Rational prod(1);
      for (int u = 0; u < k; ++u) prod *= Rational(2 * (n + u + t + 1) + 1, 2);
      d[static_cast<size_t>(k)][static_cast<size_t>(t)] = prod;
    }
  return d;
}

/** Runs the proof's elimination: add row i times -(n+i+1/2) to row i+1
 *  for i = size-1 down to 1 (1-based), then checks the first column
 *  collapses and the scaled minor equals normalized_D(n+1, size-1).
 *  Returns the rank certified by the recursion. */
int recursion_rank(int n, int size, std::vector<std::string>* trace) {
  if (size <= 0) return 0;
  if (size == 1) return 1;
  QMatrix d = normalized_D(n, size);
  for (int t = size - 2; t >= 0; --t) {
    const Rational mult(2 * (n + t) + 3, 2);  // n + t + 3/2
    for (int c = 0; c < size; ++c)
      d[static_cast<size_t>(t + 1)][static_cast<size_t>(c)] -=
          mult * d[static_cast<size_t>(t)][static_cast<size_t>(c)];
  }
  for (int k = 1; k < size; ++k)
    if (d[static_cast<size_t>(k)][0] != 0)
      throw std::logic_error("rank recursion: first column did not collapse");
  const QMatrix next = normalized_D(n + 1, size - 1);
  for (int k = 1; k < size; ++k)
    for (int c = 1; c < size; ++c) {
      const Rational scaled = d[static_cast<size_t>(k)][static_cast<size_t>(c)] / Rational(c);
      if (scaled != next[static_cast<size_t>(k - 1)][static_cast<size_t>(c - 1)])
        throw std::logic_error("rank recursion: minor does not match the shifted matrix");
    }
  if (trace)
    trace->push_back("recursion: D(" + std::to_string(size) + ", n=" + std::to_string(n) +
                     ") -> D(" + std::to_string(size - 1) + ", n=" + std::to_string(n + 1) + ")");
  return 1 + recursion_rank(n + 1, size - 1, trace);
}

RankReport rank_D_impl(bool smooth, int n, int m, int r) {
  RankReport rep;
  rep.name = smooth ? "D_smooth" : "D_piecewise";
  const int size = m - 1;
  rep.rows = rep.cols = size;
  rep.expected_rank = size;

  // Raw entries with the transcendental factor stripped.
  QMatrix raw(static_cast<size_t>(size), std::vector<Rational>(static_cast<size_t>(size)));
  for (int k = 0; k < size; ++k)
    for (int t = 0; t < size; ++t) {
      const int q = t + 1;
      raw[static_cast<size_t>(k)][static_cast<size_t>(t)] =
          smooth ? b_coeff(n + q, r + m - q, k).pi_part
                 : c_coeff(n + q, r + m - q, k).rt2_part;
    }

  // Row and column factors; entry = rowfac_k * colfac_q * normalized(k, q).
  rep.normalized = normalized_D(n, size);
  for (int k = 0; k < size; ++k) {
    Rational rowfac = smooth
        ? Rational(1, factorial(n + r + m + k + 1))
        : Rational(pow2(k), double_factorial(2 * (n + r + m + k) + 1));
    for (int t = 0; t < size; ++t) {
      const int q = t + 1;
      Rational colfac = smooth
          ? Rational(double_factorial(2 * (r + m - q) + 1) * double_factorial(2 * (n + q) - 1),
                     pow2(n + q + 2))
          : Rational(pow2(2 * (r + m - q) - 2) * factorial(r + m - q) *
                     double_factorial(2 * (n + q) - 1));
      if (raw[static_cast<size_t>(k)][static_cast<size_t>(t)] !=
          rowfac * colfac * rep.normalized[static_cast<size_t>(k)][static_cast<size_t>(t)])
        throw std::logic_error("rank_D: factor removal mismatch");
    }
  }
  rep.trace.push_back("factor removal verified entrywise");

  rep.computed_rank = rank_bareiss(raw, &rep.trace);
  const int by_recursion = recursion_rank(n, size, &rep.trace);
  rep.recursion_checked = (by_recursion == rep.computed_rank);
  rep.match = rep.recursion_checked && rep.computed_rank == rep.expected_rank;
  return rep;
}

}  // namespace

RankReport rank_D_smooth(int n, int m, int r) {
  if (m < 2 || n < 1 || r < 0)
    throw std::invalid_argument("rank_D_smooth: need m >= 2, n >= 1, r >= 0");
  return rank_D_impl(true, n, m, r);
}

RankReport rank_D_piecewise(int n, int l, int rt) {
  if (l < 2 || n < 1 || rt < 1)
    throw std::invalid_argument("rank_D_piecewise: need l >= 2, n >= 1, rt >= 1");
  return rank_D_impl(false, n, l, rt);
}

namespace {

/** Canonical parameter basis: head elements then tail elements. */
std::vector<BasisTerm> canonical_basis(Family family, int n, int m, int r) {
  std::vector<BasisTerm> basis;
  const bool smooth = family == Family::SmoothOdd;
  const int head_top = m >= 2 ? n + m - 1 : n;
  for (int i = 0; i <= head_top; ++i)
    basis.push_back(smooth ? BasisTerm{BasisKind::I, i, 2 * r + 1}
                           : BasisTerm{BasisKind::J, i, 2 * r});
  for (int t = 1; t <= m - 1; ++t)
    basis.push_back(smooth ? BasisTerm{BasisKind::L, n - 1 + t, r + m - t}
                           : BasisTerm{BasisKind::Lt, n - 1 + t, r + m - 1 - t});
  return basis;
}

Rational stripped_coeff(Family family, const ExactCoeff& c) {
  if (family == Family::SmoothOdd) {
    if (c.rt2_part != 0 || c.unit_part != 0)
      throw std::logic_error("expected a pi-rational coefficient");
    return c.pi_part;
  }
  if (c.pi_part != 0 || c.unit_part != 0)
    throw std::logic_error("expected a sqrt2-rational coefficient");
  return c.rt2_part;
}

}  // namespace

RankReport jacobian_rank(Family family, int n, int m, int r) {
  const bool smooth = family == Family::SmoothOdd;
  if (n < 0 || m < 1 || r < 0 || (!smooth && r < 1))
    throw std::invalid_argument("jacobian_rank: invalid shape");
  const int dim = n + 2 * m - 1;
  const int base0 = smooth ? 2 * (r + 1) : 2 * r + 1;

  RankReport rep;
  rep.name = smooth ? "jacobian_smooth" : "jacobian_piecewise";
  rep.rows = rep.cols = dim;
  rep.expected_rank = dim;

  const std::vector<BasisTerm> basis = canonical_basis(family, n, m, r);
  rep.normalized.assign(static_cast<size_t>(dim),
                        std::vector<Rational>(static_cast<size_t>(dim)));
  const int cap = base0 + 2 * (dim - 1);
  for (int col = 0; col < dim; ++col) {
    const HalfPowerSeries s = term_series(basis[static_cast<size_t>(col)], cap);
    for (int k = 0; k < dim; ++k)
      rep.normalized[static_cast<size_t>(k)][static_cast<size_t>(col)] =
          stripped_coeff(family, s.at_half(base0 + 2 * k));
  }

  rep.computed_rank = rank_bareiss(rep.normalized, &rep.trace);

  rep.diagonal_nonzero = true;
  for (int k = 0; k < dim; ++k)
    rep.diagonal_nonzero =
        rep.diagonal_nonzero && rep.normalized[static_cast<size_t>(k)][static_cast<size_t>(k)] != 0;

  rep.lower_triangular = true;
  for (int k = 0; k < dim; ++k)
    for (int c = k + 1; c < dim; ++c)
      rep.lower_triangular =
          rep.lower_triangular && rep.normalized[static_cast<size_t>(k)][static_cast<size_t>(c)] == 0;

  // Head columns start on the diagonal; tail columns are zero above row
  // n+m, where the D-block begins.
  rep.block_structure_ok = true;
  const int head_cols = m >= 2 ? n + m : n + 1;
  for (int c = 0; c < dim && rep.block_structure_ok; ++c)
    for (int k = 0; k < (c < head_cols ? c : n + m); ++k)
      if (rep.normalized[static_cast<size_t>(k)][static_cast<size_t>(c)] != 0) {
        rep.block_structure_ok = false;
        break;
      }

  rep.match = rep.computed_rank == rep.expected_rank && rep.diagonal_nonzero &&
              rep.block_structure_ok && (m > 2 || rep.lower_triangular);
  return rep;
}

QMatrix coefficient_map(Family family, const ReductionShape& shape, int k) {
  const int n = shape.n, m = shape.m, r = shape.r;
  if (m < 1 || n < 0 || k < 0)
    throw std::invalid_argument("coefficient_map: invalid shape");
  const bool smooth = family == Family::SmoothOdd;
  const int base0 = smooth ? 2 * (r + 1) : 2 * r + 1;
  const int cap = base0 + 2 * k;
  QMatrix map(static_cast<size_t>(k + 1),
              std::vector<Rational>(static_cast<size_t>(m * (n + 1))));
  for (int jj = 0; jj < m; ++jj)
    for (int i = 0; i <= n; ++i) {
      const BasisTerm t = smooth ? BasisTerm{BasisKind::I, i, 2 * (r + jj) + 1}
                                 : BasisTerm{BasisKind::J, i, 2 * (r + jj)};
      const HalfPowerSeries s = term_series(t, cap);
      const int col = jj * (n + 1) + i;
      for (int row = 0; row <= k; ++row)
        map[static_cast<size_t>(row)][static_cast<size_t>(col)] =
            stripped_coeff(family, s.at_half(base0 + 2 * row));
    }
  return map;
}

}  // namespace melkit
