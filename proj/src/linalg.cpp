#include "melkit/linalg.hpp"

#include <stdexcept>

namespace melkit {

int rank_bareiss(QMatrix a, std::vector<std::string>* trace) {
  const size_t rows = a.size();
  if (rows == 0) return 0;
  const size_t cols = a[0].size();

  // Clear denominators row by row; scaling a row by a positive integer
  // does not change the rank.
  std::vector<std::vector<Integer>> m(rows, std::vector<Integer>(cols));
  for (size_t r = 0; r < rows; ++r) {
    Integer lcm = 1;
    for (const auto& q : a[r]) {
      Integer den = q.get_den();
      Integer g;
      mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
      lcm = lcm / g * den;
    }
    for (size_t c = 0; c < cols; ++c) {
      Rational scaled = a[r][c] * Rational(lcm);
      scaled.canonicalize();
      m[r][c] = scaled.get_num();
    }
  }

  Integer prev_pivot = 1;
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot_row = rank;
    while (pivot_row < rows && m[pivot_row][col] == 0) ++pivot_row;
    if (pivot_row == rows) continue;
    std::swap(m[rank], m[pivot_row]);
    const Integer pivot = m[rank][col];
    if (trace)
      trace->push_back("pivot r" + std::to_string(rank) + " c" + std::to_string(col) +
                       " = " + pivot.get_str());
    for (size_t r = rank + 1; r < rows; ++r) {
      for (size_t c = col + 1; c < cols; ++c) {
        Integer num = pivot * m[r][c] - m[r][col] * m[rank][c];
        mpz_divexact(m[r][c].get_mpz_t(), num.get_mpz_t(), prev_pivot.get_mpz_t());
      }
      m[r][col] = 0;
    }
    prev_pivot = pivot;
    ++rank;
  }
  return static_cast<int>(rank);
}

QMatrix rref(QMatrix a, std::vector<int>* pivots) {
  const size_t rows = a.size();
  if (rows == 0) return a;
  const size_t cols = a[0].size();
  size_t lead = 0;
  for (size_t col = 0; col < cols && lead < rows; ++col) {
    size_t pivot_row = lead;
    while (pivot_row < rows && a[pivot_row][col] == 0) ++pivot_row;
    if (pivot_row == rows) continue;
    std::swap(a[lead], a[pivot_row]);
    const Rational inv = 1 / a[lead][col];
    for (size_t c = col; c < cols; ++c) a[lead][c] *= inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == lead || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (size_t c = col; c < cols; ++c) a[r][c] -= factor * a[lead][c];
    }
    if (pivots) pivots->push_back(static_cast<int>(col));
    ++lead;
  }
  return a;
}

std::optional<std::vector<Rational>> solve_square(const QMatrix& a,
                                                  const std::vector<Rational>& b) {
  const size_t n = a.size();
  if (n == 0 || a[0].size() != n || b.size() != n)
    throw std::invalid_argument("solve_square: dimension mismatch");
  QMatrix aug(n, std::vector<Rational>(n + 1));
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < n; ++c) aug[r][c] = a[r][c];
    aug[r][n] = b[r];
  }
  std::vector<int> pivots;
  aug = rref(std::move(aug), &pivots);
  if (pivots.size() != n || pivots.back() == static_cast<int>(n)) return std::nullopt;
  std::vector<Rational> x(n);
  for (size_t r = 0; r < n; ++r) x[static_cast<size_t>(pivots[r])] = aug[r][n];
  return x;
}

std::vector<Rational> solve_any(const QMatrix& a, const std::vector<Rational>& b) {
  const size_t rows = a.size();
  if (rows == 0 || b.size() != rows)
    throw std::invalid_argument("solve_any: dimension mismatch");
  const size_t cols = a[0].size();
  QMatrix aug(rows, std::vector<Rational>(cols + 1));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) aug[r][c] = a[r][c];
    aug[r][cols] = b[r];
  }
  std::vector<int> pivots;
  aug = rref(std::move(aug), &pivots);
  for (size_t p = 0; p < pivots.size(); ++p)
    if (pivots[p] == static_cast<int>(cols))
      throw std::invalid_argument("solve_any: inconsistent system");
  std::vector<Rational> x(cols, Rational(0));
  for (size_t p = 0; p < pivots.size(); ++p)
    x[static_cast<size_t>(pivots[p])] = aug[p][cols];
  return x;
}

std::vector<std::vector<Rational>> kernel_basis(const QMatrix& a) {
  const size_t rows = a.size();
  if (rows == 0) return {};
  const size_t cols = a[0].size();
  std::vector<int> pivots;
  const QMatrix r = rref(a, &pivots);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;

  std::vector<std::vector<Rational>> basis;
  for (size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free_col] = 1;
    for (size_t p = 0; p < pivots.size(); ++p)
      v[static_cast<size_t>(pivots[p])] = -r[p][free_col];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace melkit
