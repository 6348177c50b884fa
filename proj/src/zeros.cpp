#include "melkit/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "melkit/linalg.hpp"
#include "melkit/parallel.hpp"
#include "melkit/ranks.hpp"

namespace melkit {

int max_zero_bound(const BoundQuery& q) {
  if (q.family == Family::SmoothOdd) {
    if (q.n < 0 || q.m < 1)
      throw std::invalid_argument("max_zero_bound: need n >= 0, m >= 1");
    return q.n > 0 ? q.n + 2 * q.m - 2 : q.m - 1;
  }
  if (q.n < 0 || q.s1 < 1 || q.s_hat < q.s1)
    throw std::invalid_argument("max_zero_bound: need n >= 0, 1 <= s1 <= s_hat");
  if (q.n == 0) return q.s_hat - q.s1;
  if (q.s_hat == q.s1) return q.n;
  return 2 * (q.n + q.s_hat - q.s1) - 1;
}

nlohmann::json SignCountResult::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["changes"] = changes;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& b : brackets) {
    nlohmann::json e;
    e["lo"] = b.lo;
    e["hi"] = b.hi;
    e["root"] = b.root;
    e["f_lo"] = b.f_lo;
    e["f_hi"] = b.f_hi;
    list.push_back(e);
  }
  j["brackets"] = list;
  j["warnings"] = warnings;
  return j;
}

SignCountResult count_sign_changes(const std::function<QuadResult(double)>& f,
                                   double h_lo, double h_hi, int grid) {
  if (!(h_lo > 0 && h_lo < h_hi && h_hi < 2))
    throw std::invalid_argument("count_sign_changes: need 0 < h_lo < h_hi < 2");
  grid = std::max(grid, 16);

  std::vector<double> h(static_cast<size_t>(grid));
  const double ratio = h_lo / h_hi;
  for (int k = 0; k < grid; ++k)
    h[static_cast<size_t>(k)] =
        h_hi * std::pow(ratio, static_cast<double>(grid - 1 - k) / (grid - 1));

  std::vector<QuadResult> values(h.size());
  parallel_for(h.size(), [&](size_t k) { values[k] = f(h[k]); });

  SignCountResult out;
  auto sign_of = [&](size_t k) -> int {
    const QuadResult& v = values[k];
    if (std::fabs(v.value) < 10.0 * v.abs_error_estimate) {
      out.warnings.push_back("indeterminate sign at h = " + std::to_string(h[k]) +
                             " (|value| below 10x error estimate)");
      return 0;
    }
    return v.value > 0 ? 1 : -1;
  };

  int prev_sign = 0;
  size_t prev_idx = 0;
  for (size_t k = 0; k < h.size(); ++k) {
    const int s = sign_of(k);
    if (s == 0) continue;
    if (prev_sign != 0 && s != prev_sign) {
      SignChange change;
      change.lo = h[prev_idx];
      change.hi = h[k];
      change.f_lo = values[prev_idx].value;
      change.f_hi = values[k].value;
      // Bisection to relative width 1e-6; stops early if the sign at the
      // midpoint drowns in the quadrature error estimate.
      double lo = change.lo, hi = change.hi;
      int lo_sign = prev_sign;
      while ((hi - lo) > 1e-6 * 0.5 * (hi + lo)) {
        const double mid = 0.5 * (lo + hi);
        const QuadResult v = f(mid);
        if (std::fabs(v.value) < v.abs_error_estimate) {
          out.warnings.push_back("bisection noise floor at h = " + std::to_string(mid));
          break;
        }
        if ((v.value > 0 ? 1 : -1) == lo_sign)
          lo = mid;
        else
          hi = mid;
      }
      change.lo = lo;
      change.hi = hi;
      change.root = 0.5 * (lo + hi);
      out.brackets.push_back(change);
      ++out.changes;
    }
    prev_sign = s;
    prev_idx = k;
  }
  return out;
}

nlohmann::json Realization::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["family"] = query.family == Family::SmoothOdd ? "smooth" : "piecewise";
  j["bound"] = max_zero_bound(query);
  j["locations"] = locations;
  j["eps0"] = eps0;
  j["perturbation"] = perturbation_to_json(perturbation);
  j["validation"] = validation.to_json();
  j["verified"] = verified;
  if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
  return j;
}

namespace {

/** Coefficients of prod (x - roots[t]), exact. */
std::vector<Rational> poly_from_roots(const std::vector<Rational>& roots) {
  std::vector<Rational> poly{Rational(1)};
  for (const auto& root : roots) {
    std::vector<Rational> next(poly.size() + 1, Rational(0));
    for (size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= poly[k] * root;
    }
    poly = std::move(next);
  }
  return poly;
}

/** Dense double solve with partial pivoting (tiny systems only). */
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const size_t n = a.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) throw std::runtime_error("realize: singular target system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (size_t c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

struct LadderSlot {
  int half_exp;
  bool odd_ladder;  // pi side (I) vs sqrt2 side (J even)
  int k;            // row in the ladder's coefficient map
};

/** Margin check at one lattice point: the truncated series (matched
 *  slots plus the exactly computed tail window) must carry the sign of
 *  the matched polynomial, with the remainder beyond the window --
 *  bounded geometrically from the trailing terms -- below half its
 *  magnitude. */
bool margin_ok(const HalfPowerSeries& series, const std::vector<int>& slots,
               double h, std::string* why) {
  const int cap = series.known_through();
  double matched = 0.0;
  for (int e : slots) matched += series.at_half(e).to_double() * std::pow(h, 0.5 * e);
  const double value = series.eval_precise(rational_from_double(h));

  double prev_mag = -1.0, ratio = 0.0, last_mag = 0.0;
  for (int e = slots.back() + 1; e <= cap; ++e) {
    const double mag = std::fabs(series.at_half(e).to_double()) * std::pow(h, 0.5 * e);
    if (mag > 0) {
      if (prev_mag > 0) ratio = std::max(ratio, mag / prev_mag);
      prev_mag = mag;
      last_mag = mag;
    }
  }
  // The basis series converge for h < 2; at lattice scale the term
  // ratios sit far below 1, so a geometric remainder bound is sound.
  if (ratio > 0.75) {
    if (why) *why = "tail ratio too close to 1 at h = " + std::to_string(h);
    return false;
  }
  const double remainder = (ratio > 0) ? last_mag * ratio / (1.0 - ratio) : 0.0;
  const bool sign_ok = (value > 0) == (matched > 0) && value != 0.0;
  if (!sign_ok || !(remainder < 0.5 * std::fabs(value))) {
    if (why)
      *why = "truncation margin failed at h = " + std::to_string(h) +
             " (locations too clustered; spread them further apart)";
    return false;
  }
  return true;
}

Realization validate_realization(Realization real, const MelnikovCombination& comb,
                                 const std::vector<int>& slot_exps) {
  const std::vector<double>& locs = real.locations;
  const double h_max = locs.back();
  real.eps0 = 2.0 * h_max;

  // Exact-series sign lattice: below the first zero, between zeros,
  // above the last one up to eps0.
  const int cap = slot_exps.back() + 24;
  const HalfPowerSeries series = expand_to_cap(comb, cap);
  std::vector<double> lattice;
  lattice.push_back(locs.front() / 20.0);
  lattice.push_back(locs.front() / 4.0);
  for (size_t t = 0; t + 1 < locs.size(); ++t)
    lattice.push_back(std::sqrt(locs[t] * locs[t + 1]));
  lattice.push_back(std::sqrt(h_max * real.eps0));
  lattice.push_back(real.eps0);

  std::string why;
  for (double h : lattice)
    if (!margin_ok(series, slot_exps, h, &why)) {
      real.verified = false;
      real.diagnostic = why;
      return real;
    }

  // Quadrature confirmation: exactly `bound` sign changes on
  // (first/10, 2*last], each bracketed to relative width 1e-6.
  const int bound = static_cast<int>(locs.size());
  auto evaluator = [&real](double h) {
    return quad_melnikov(real.perturbation, EnergyLevel(h), 1e-12);
  };
  real.validation = count_sign_changes(evaluator, locs.front() / 10.0, real.eps0, 48);
  if (real.validation.changes != bound) {
    real.verified = false;
    real.diagnostic = "quadrature found " + std::to_string(real.validation.changes) +
                      " sign changes, expected " + std::to_string(bound);
    return real;
  }
  real.verified = true;
  return real;
}

Realization realize_smooth(const BoundQuery& q, const std::vector<double>& locations,
                           int r) {
  const int n = q.n, m = q.m;
  const int K = max_zero_bound(q);
  ReductionShape shape{n, m, r};

  // Leading coefficients matched to the monic polynomial with the
  // requested roots; the overall pi factor cancels out of the zeros.
  std::vector<Rational> roots;
  for (double h : locations) roots.push_back(rational_from_double(h));
  const std::vector<Rational> beta = poly_from_roots(roots);

  const QMatrix map = coefficient_map(Family::SmoothOdd, shape, K);
  const std::vector<Rational> ctilde = solve_any(map, beta);

  SmoothPerturbation p;
  p.n = n;
  p.s1 = 2 * r + 1;
  p.s2 = 2 * (r + m - 1) + 1;
  p.q.resize(static_cast<size_t>(p.s2 - p.s1 + 1));
  for (auto& poly : p.q) poly.a.assign(static_cast<size_t>(n + 1), Rational(0));
  for (int jj = 0; jj < m; ++jj) {
    std::vector<Rational> w(static_cast<size_t>(n + 1));
    for (int i = 0; i <= n; ++i) w[static_cast<size_t>(i)] = ctilde[static_cast<size_t>(jj * (n + 1) + i)];
    p.q[static_cast<size_t>(2 * jj)].a = cos_powers_from_w_basis(w);
  }
  p.validate();

  Realization real;
  real.query = q;
  real.locations = locations;
  real.perturbation = p;

  std::vector<int> slots;
  for (int k = 0; k <= K; ++k) slots.push_back(2 * (r + 1) + 2 * k);
  return validate_realization(std::move(real), assemble_smooth(p), slots);
}

Realization realize_piecewise(const BoundQuery& q, const std::vector<double>& locations) {
  const int n = q.n, s1 = q.s1, s_hat = q.s_hat;
  const int K = max_zero_bound(q);
  const int r = s1 / 2;
  const int m = (s_hat - 2 * r + 1) / 2;
  const int rt = (s1 + 1) / 2;
  const int l = (s_hat - 2 * rt + 2) / 2;

  // Free coefficient slots of the combined ladder on the sqrt(h) grid:
  // pi-side exponents are even, sqrt2-side odd, so they never collide.
  std::vector<LadderSlot> slots;
  const int odd_count = m == 0 ? 0 : (n > 0 ? n + 2 * m - 1 : m);
  const int even_count = l == 0 ? 0 : (n > 0 ? n + 2 * l - 1 : l);
  for (int k = 0; k < odd_count; ++k) slots.push_back({2 * (r + 1) + 2 * k, true, k});
  for (int k = 0; k < even_count; ++k) slots.push_back({2 * rt + 1 + 2 * k, false, k});
  std::sort(slots.begin(), slots.end(),
            [](const LadderSlot& a, const LadderSlot& b) { return a.half_exp < b.half_exp; });
  if (static_cast<int>(slots.size()) != K + 1)
    throw std::logic_error("realize: ladder slot count does not match the bound");

  // Generalized Vandermonde in rho = sqrt(h): q(rho_t) = 0 with the
  // top-slot coefficient normalized to 1.
  std::vector<double> rho;
  for (double h : locations) rho.push_back(std::sqrt(h));
  std::vector<std::vector<double>> vmat(static_cast<size_t>(K), std::vector<double>(static_cast<size_t>(K)));
  std::vector<double> rhs(static_cast<size_t>(K));
  for (int t = 0; t < K; ++t) {
    for (int j = 0; j < K; ++j)
      vmat[static_cast<size_t>(t)][static_cast<size_t>(j)] =
          std::pow(rho[static_cast<size_t>(t)], slots[static_cast<size_t>(j)].half_exp);
    rhs[static_cast<size_t>(t)] =
        -std::pow(rho[static_cast<size_t>(t)], slots.back().half_exp);
  }
  std::vector<double> coef = solve_dense(std::move(vmat), std::move(rhs));
  coef.push_back(1.0);

  // Split the targets per ladder and strip the transcendental factors;
  // the doubles become exact dyadic rationals, so the per-ladder solves
  // and the later series assertions stay exact.
  std::vector<Rational> target_odd(static_cast<size_t>(std::max(odd_count, 0)), Rational(0));
  std::vector<Rational> target_even(static_cast<size_t>(std::max(even_count, 0)), Rational(0));
  for (size_t j = 0; j < slots.size(); ++j) {
    const LadderSlot& slot = slots[j];
    if (slot.odd_ladder)
      target_odd[static_cast<size_t>(slot.k)] = rational_from_double(coef[j] / M_PI);
    else
      target_even[static_cast<size_t>(slot.k)] = rational_from_double(coef[j] / M_SQRT2);
  }

  PiecewisePerturbation p;
  p.n = n;
  p.s1 = s1;
  p.s2 = s_hat;
  p.s3 = s1;
  p.plus.resize(static_cast<size_t>(s_hat - s1 + 1));
  p.minus.resize(1);
  for (auto& poly : p.plus) poly.a.assign(static_cast<size_t>(n + 1), Rational(0));
  p.minus[0].a.assign(static_cast<size_t>(n + 1), Rational(0));

  if (odd_count > 0) {
    // The odd J-part equals half the I-combination, hence the factor 2.
    QMatrix map = coefficient_map(Family::SmoothOdd, {n, m, r}, odd_count - 1);
    std::vector<Rational> doubled = target_odd;
    for (auto& v : doubled) v *= 2;
    const std::vector<Rational> b = solve_any(map, doubled);
    for (int jj = 0; jj < m; ++jj) {
      std::vector<Rational> w(static_cast<size_t>(n + 1));
      for (int i = 0; i <= n; ++i) w[static_cast<size_t>(i)] = b[static_cast<size_t>(jj * (n + 1) + i)];
      p.plus[static_cast<size_t>(2 * (r + jj) + 1 - s1)].a = cos_powers_from_w_basis(w);
    }
  }
  if (even_count > 0) {
    QMatrix map = coefficient_map(Family::PiecewiseHalf, {n, l, rt}, even_count - 1);
    const std::vector<Rational> b = solve_any(map, target_even);
    for (int jj = 0; jj < l; ++jj) {
      std::vector<Rational> w(static_cast<size_t>(n + 1));
      for (int i = 0; i <= n; ++i) w[static_cast<size_t>(i)] = b[static_cast<size_t>(jj * (n + 1) + i)];
      p.plus[static_cast<size_t>(2 * (rt + jj) - s1)].a = cos_powers_from_w_basis(w);
    }
  }
  p.validate();

  Realization real;
  real.query = q;
  real.locations = locations;
  real.perturbation = p;

  std::vector<int> slot_exps;
  for (const auto& slot : slots) slot_exps.push_back(slot.half_exp);
  return validate_realization(std::move(real), assemble_piecewise(p), slot_exps);
}

}  // namespace

Realization realize_zeros(const BoundQuery& q, const std::vector<double>& locations,
                          int r) {
  const int K = max_zero_bound(q);
  if (K < 1)
    throw std::invalid_argument("realize_zeros: the bound is zero, nothing to realize");
  if (static_cast<int>(locations.size()) != K)
    throw std::invalid_argument("realize_zeros: need exactly " + std::to_string(K) +
                                " locations (the sharp bound)");
  std::vector<double> sorted = locations;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() <= 0 || sorted.back() > 0.2)
    throw std::invalid_argument("realize_zeros: locations must lie in (0, 0.2]");
  for (size_t t = 0; t + 1 < sorted.size(); ++t)
    if (sorted[t] == sorted[t + 1])
      throw std::invalid_argument("realize_zeros: locations must be distinct");

  if (q.family == Family::SmoothOdd) return realize_smooth(q, sorted, r < 0 ? 0 : r);
  if (r >= 0)
    throw std::invalid_argument("realize_zeros: r is derived from s1 for the piecewise family");
  return realize_piecewise(q, sorted);
}

}  // namespace melkit
