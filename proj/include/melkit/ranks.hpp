#ifndef MELKIT_RANKS_HPP
#define MELKIT_RANKS_HPP

#include <json.hpp>

#include <string>
#include <vector>

#include "melkit/linalg.hpp"
#include "melkit/melnikov.hpp"

namespace melkit {

struct RankReport {
  std::string name;
  int rows = 0;
  int cols = 0;
  QMatrix normalized;  // entries with common row/column factors removed
  int computed_rank = 0;
  int expected_rank = 0;
  bool match = false;
  /** Factor removal reproduced the normalized matrix entrywise, and the
   *  paper-style row-reduction recursion reached the same rank. Only
   *  set by the D-matrix reports. */
  bool recursion_checked = false;
  /** Jacobian structure: strictly lower triangular (head cases) and the
   *  block pattern head-triangular/tail-dense-from-row-(n+m). */
  bool lower_triangular = false;
  bool block_structure_ok = false;
  bool diagonal_nonzero = false;
  std::vector<std::string> trace;

  nlohmann::json to_json() const;
};

/** D_{m-1} from the tail expansion coefficients b^k_{n+i,r+m-i}
 *  (pi factor stripped), m >= 2, n >= 1, r >= 0. Verifies the direct
 *  Bareiss rank and the row-reduction recursion agree on m-1. */
RankReport rank_D_smooth(int n, int m, int r);

/** Dtilde_{l-1} from c^k_{n+i,rt+l-i} (sqrt2 stripped), l >= 2, n >= 1,
 *  rt >= 1. */
RankReport rank_D_piecewise(int n, int l, int rt);

/** Jacobian of the expansion coefficients (B_0,...,B_{n+2m-2}) with
 *  respect to the canonical parameters, assembled from the series
 *  pipeline. Expected rank n+2m-1; strictly lower triangular for
 *  m <= 2, block lower triangular with the D-block in general. */
RankReport jacobian_rank(Family family, int n, int m, int r);

/** The (k+1) x (m(n+1)) map from input ladder coefficients to the
 *  expansion coefficients B_0..B_k; rows are series coefficients of the
 *  base ladder (pi or sqrt2 stripped). */
QMatrix coefficient_map(Family family, const ReductionShape& shape, int k);

}  // namespace melkit

#endif
