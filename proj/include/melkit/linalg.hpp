#ifndef MELKIT_LINALG_HPP
#define MELKIT_LINALG_HPP

#include <optional>
#include <string>
#include <vector>

#include "melkit/rational.hpp"

namespace melkit {

using QMatrix = std::vector<std::vector<Rational>>;

/** Exact rank by fraction-free (Bareiss) elimination: rows are scaled
 *  to integers, then eliminated with exact divisions only. An optional
 *  trace records the pivot sequence. */
int rank_bareiss(QMatrix a, std::vector<std::string>* trace = nullptr);

/** Reduced row echelon form; pivot column indices appended to *pivots. */
QMatrix rref(QMatrix a, std::vector<int>* pivots = nullptr);

/** Solves a square nonsingular system exactly; nullopt when singular. */
std::optional<std::vector<Rational>> solve_square(const QMatrix& a,
                                                  const std::vector<Rational>& b);

/** Any exact solution of a (possibly underdetermined) consistent system,
 *  with non-pivot variables set to zero. Throws on inconsistency. */
std::vector<Rational> solve_any(const QMatrix& a, const std::vector<Rational>& b);

/** Basis of the right null space. */
std::vector<std::vector<Rational>> kernel_basis(const QMatrix& a);

}  // namespace melkit

#endif
