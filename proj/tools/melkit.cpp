#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "melkit/exact_coeff.hpp"
#include "melkit/melnikov.hpp"
#include "melkit/perturbation.hpp"
#include "melkit/quadrature.hpp"
#include "melkit/ranks.hpp"
#include "melkit/sim.hpp"
#include "melkit/zeros.hpp"

using namespace melkit;

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::string half_power_label(int half_exp) {
  if (half_exp % 2 == 0) {
    const int p = half_exp / 2;
    if (p == 1) return "h";
    return "h^" + std::to_string(p);
  }
  return "h^(" + std::to_string(half_exp) + "/2)";
}

std::string series_pretty(const HalfPowerSeries& s) {
  if (s.identically_zero()) return "0 (identically zero)";
  std::string out;
  for (int he = s.base_half_exponent(); he <= s.known_through(); ++he) {
    const ExactCoeff& c = s.at_half(he);
    if (c.is_zero()) continue;
    std::string coeff = c.str();
    const bool composite = coeff.find(' ') != std::string::npos;
    if (!out.empty()) {
      if (!composite && coeff.front() == '-') {
        out += " - ";
        coeff.erase(0, 1);
      } else {
        out += " + ";
      }
    }
    out += (composite ? "(" + coeff + ")" : coeff) + "*" + half_power_label(he);
  }
  return out.empty() ? "0 (through the truncation window)" : out;
}

ordered_json series_to_json(const HalfPowerSeries& s, int digits) {
  ordered_json j;
  j["schema_version"] = 1;
  if (s.identically_zero()) {
    j["identically_zero"] = true;
    j["terms"] = ordered_json::array();
    return j;
  }
  j["identically_zero"] = false;
  ordered_json terms = ordered_json::array();
  for (int he = s.base_half_exponent(); he <= s.known_through(); ++he) {
    const ExactCoeff& c = s.at_half(he);
    if (c.is_zero()) continue;
    ordered_json term;
    term["half_exponent"] = he;
    term["pi_part"] = to_string(c.pi_part);
    term["rt2_part"] = to_string(c.rt2_part);
    term["unit_part"] = to_string(c.unit_part);
    term["decimal"] = evaluate_decimal(c, digits);
    terms.push_back(term);
  }
  j["terms"] = terms;
  return j;
}

BasisTerm parse_term(const std::string& kind, int i, int j) {
  if (kind == "I") return {BasisKind::I, i, j};
  if (kind == "J") return {BasisKind::J, i, j};
  if (kind == "L") return {BasisKind::L, i, j};
  if (kind == "Lt") return {BasisKind::Lt, i, j};
  throw std::invalid_argument("unknown term kind '" + kind + "' (I, J, L, Lt)");
}

int cmd_expand(const std::string& input, const std::string& term, int i, int j,
               int order, int digits, bool json) {
  HalfPowerSeries s = HalfPowerSeries::zero();
  if (!input.empty()) {
    const Perturbation p = load_perturbation(input);
    const MelnikovCombination comb =
        std::holds_alternative<SmoothPerturbation>(p)
            ? assemble_smooth(std::get<SmoothPerturbation>(p))
            : assemble_piecewise(std::get<PiecewisePerturbation>(p));
    s = comb.empty() ? HalfPowerSeries::zero() : expand(comb, order);
  } else {
    MelnikovCombination comb;
    comb.family = term == "I" || term == "L" ? Family::SmoothOdd : Family::PiecewiseHalf;
    comb.add(parse_term(term, i, j), Rational(1));
    s = expand(comb, order);
  }
  if (json) {
    std::printf("%s\n", series_to_json(s, digits).dump(2).c_str());
  } else {
    std::printf("%s\n", series_pretty(s).c_str());
    if (!s.identically_zero()) {
      for (int he = s.base_half_exponent(); he <= s.known_through(); ++he)
        if (!s.at_half(he).is_zero())
          std::printf("  %-10s %s\n", half_power_label(he).c_str(),
                      evaluate_decimal(s.at_half(he), digits).c_str());
    }
  }
  return 0;
}

int cmd_quad(const std::string& input, const std::string& term, int i, int j,
             double h, double tol, bool json) {
  QuadResult res;
  if (!input.empty()) {
    res = quad_melnikov(load_perturbation(input), EnergyLevel(h), tol);
  } else if (term == "I") {
    res = quad_I(i, j, EnergyLevel(h), tol);
  } else if (term == "J") {
    res = quad_J(i, j, EnergyLevel(h), tol);
  } else {
    throw std::invalid_argument("quad: need --input or --term I|J");
  }
  if (json) {
    ordered_json out;
    out["schema_version"] = 1;
    out["value"] = res.value;
    out["abs_error_estimate"] = res.abs_error_estimate;
    out["evaluations"] = res.evaluations;
    out["converged"] = res.converged;
    out["near_separatrix"] = res.near_separatrix;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("value = %.15g  (error estimate %.3g, %ld evaluations%s%s)\n", res.value,
                res.abs_error_estimate, res.evaluations,
                res.converged ? "" : ", tolerance NOT reached",
                res.near_separatrix ? ", near separatrix" : "");
  }
  return res.converged ? 0 : 1;
}

int cmd_identities(int imax, int rmax, int kmax, int order, const std::string& h_list,
                   double tol, bool json) {
  int failures = 0;
  ordered_json rows = ordered_json::array();
  const std::vector<double> hs = parse_list(h_list);

  auto check = [&](const LinearRelation& rel, const char* name, int i, int r, int k) {
    MelnikovCombination residual;
    residual.family = rel.lhs.kind == BasisKind::I ? Family::SmoothOdd : Family::PiecewiseHalf;
    residual.add(rel.lhs, Rational(1));
    for (const auto& [t, c] : rel.rhs) residual.add(t, -c);
    const int cap = min_base_half(residual) + 2 * order;
    const bool exact_ok =
        residual.empty() || expand_to_cap(residual, cap).vanishes_through(cap);

    double worst_rel = 0.0;
    for (double h : hs) {
      double lhs = 0.0, scale = 0.0;
      for (const auto& [t, c] : residual.terms) {
        const QuadResult q = t.kind == BasisKind::I
                                 ? quad_I(t.i, t.j, EnergyLevel(h), tol)
                                 : quad_J(t.i, t.j, EnergyLevel(h), tol);
        lhs += to_double(c) * q.value;
        scale += std::fabs(to_double(c) * q.value);
      }
      if (scale > 0) worst_rel = std::max(worst_rel, std::fabs(lhs) / scale);
    }
    const bool quad_ok = worst_rel <= 1e-7;
    if (!exact_ok || !quad_ok) ++failures;
    ordered_json row;
    row["identity"] = name;
    row["i"] = i;
    row["r"] = r;
    row["k"] = k;
    row["exact_residual_zero"] = exact_ok;
    row["quad_relative_residual"] = worst_rel;
    rows.push_back(row);
  };

  for (int i = 0; i <= imax; ++i)
    for (int r = 0; r <= rmax; ++r)
      for (int k = 0; k <= kmax; ++k) {
        check(rewrite_I(i, r, k), "zb", i, r, k);
        if (r >= 1) check(rewrite_J(i, r, k), "zg", i, r, k);
      }

  if (json) {
    ordered_json out;
    out["schema_version"] = 1;
    out["order"] = order;
    out["failures"] = failures;
    out["identities"] = rows;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("checked %zu identities through order %d: %s\n", rows.size(), order,
                failures == 0 ? "all residuals vanish" : "FAILURES PRESENT");
  }
  return failures == 0 ? 0 : 1;
}

ordered_json canonical_to_json(const CanonicalForm& canon) {
  ordered_json j;
  j["schema_version"] = 1;
  j["family"] = canon.family == Family::SmoothOdd ? "smooth" : "piecewise";
  j["n"] = canon.shape.n;
  j["m"] = canon.shape.m;
  j["r"] = canon.shape.r;
  ordered_json a = ordered_json::array();
  for (const auto& v : canon.A) a.push_back(to_string(v));
  j["A"] = a;
  ordered_json map = ordered_json::array();
  for (const auto& row : canon.input_map) {
    ordered_json r = ordered_json::array();
    for (const auto& v : row) r.push_back(to_string(v));
    map.push_back(r);
  }
  j["input_map"] = map;
  return j;
}

int cmd_reduce(const std::string& input, int fuzz, unsigned seed, int order, bool json) {
  if (fuzz > 0) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9);
    int failures = 0, cases = 0;
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m)
        for (int r = 0; r <= 1; ++r)
          for (int rep = 0; rep < fuzz; ++rep)
            for (Family family : {Family::SmoothOdd, Family::PiecewiseHalf}) {
              const ReductionShape shape{n, m, family == Family::PiecewiseHalf ? r + 1 : r};
              std::vector<std::vector<Rational>> table(
                  static_cast<size_t>(m), std::vector<Rational>(static_cast<size_t>(n + 1)));
              for (auto& row : table)
                for (auto& v : row) v = make_rational(num(rng), 1 + std::abs(num(rng)));
              const MelnikovCombination comb = combination_from_table(family, shape, table);
              if (comb.empty()) continue;
              ++cases;
              const CanonicalForm canon = reduce_to_canonical(comb, shape);
              const int cap = min_base_half(comb) + 2 * order;
              const HalfPowerSeries diff =
                  expand_to_cap(comb, cap) - expand_to_cap(canon.as_combination(), cap);
              if (!diff.vanishes_through(cap)) ++failures;
            }
    std::printf("reduction fuzz: %d cases, %d failures (seed %u)\n", cases, failures, seed);
    return failures == 0 ? 0 : 1;
  }

  const Perturbation p = load_perturbation(input);
  ordered_json out;
  out["schema_version"] = 1;
  if (std::holds_alternative<SmoothPerturbation>(p)) {
    const MelnikovCombination comb = assemble_smooth(std::get<SmoothPerturbation>(p));
    if (comb.empty()) {
      out["identically_zero"] = true;
    } else {
      out["canonical"] = canonical_to_json(reduce_to_canonical(comb));
    }
  } else {
    const auto [odd, even] = split_piecewise(assemble_piecewise(std::get<PiecewisePerturbation>(p)));
    if (!odd.empty()) out["odd_part"] = canonical_to_json(reduce_to_canonical(odd));
    if (!even.empty()) out["even_part"] = canonical_to_json(reduce_to_canonical(even));
    if (odd.empty() && even.empty()) out["identically_zero"] = true;
  }
  std::printf("%s\n", out.dump(json ? 2 : -1).c_str());
  return 0;
}

int cmd_rank(const std::string& family, int n, int m, int r, bool json) {
  const bool smooth = family == "smooth";
  ordered_json out;
  out["schema_version"] = 1;
  bool ok = true;
  if (m >= 2) {
    const RankReport d = smooth ? rank_D_smooth(n, m, r) : rank_D_piecewise(n, m, r);
    ok = ok && d.match;
    out["D"] = d.to_json();
    if (!json)
      std::printf("rank(D_{m-1}) = %d, expected %d (%s)\n", d.computed_rank, d.expected_rank,
                  d.match ? "ok" : "MISMATCH");
  }
  const RankReport jac =
      jacobian_rank(smooth ? Family::SmoothOdd : Family::PiecewiseHalf, n, m, r);
  ok = ok && jac.match;
  out["jacobian"] = jac.to_json();
  if (!json)
    std::printf("jacobian rank = %d, expected %d (%s)\n", jac.computed_rank,
                jac.expected_rank, jac.match ? "ok" : "MISMATCH");
  else
    std::printf("%s\n", out.dump(2).c_str());
  return ok ? 0 : 1;
}

int cmd_bound(const std::string& family, int n, int m, int s1, int s_hat) {
  BoundQuery q;
  q.n = n;
  if (family == "smooth") {
    q.family = Family::SmoothOdd;
    q.m = m;
  } else {
    q.family = Family::PiecewiseHalf;
    q.s1 = s1;
    q.s_hat = s_hat;
  }
  std::printf("%d\n", max_zero_bound(q));
  return 0;
}

int cmd_realize(const std::string& family, int n, int m, int r, int s1, int s_hat,
                const std::string& locations, bool json) {
  BoundQuery q;
  q.n = n;
  if (family == "smooth") {
    q.family = Family::SmoothOdd;
    q.m = m;
  } else {
    q.family = Family::PiecewiseHalf;
    q.s1 = s1;
    q.s_hat = s_hat;
  }
  const Realization real =
      realize_zeros(q, parse_list(locations), family == "smooth" ? r : -1);
  if (json) {
    std::printf("%s\n", ordered_json(real.to_json()).dump(2).c_str());
  } else {
    std::printf("realized %zu zeros, verified: %s\n", real.locations.size(),
                real.verified ? "yes" : "no");
    for (const auto& b : real.validation.brackets)
      std::printf("  zero in [%.9g, %.9g]\n", b.lo, b.hi);
    if (!real.diagnostic.empty()) std::printf("  diagnostic: %s\n", real.diagnostic.c_str());
  }
  return real.verified ? 0 : 1;
}

int cmd_zeros(const std::string& input, double h_min, double h_max, int grid,
              double tol, bool json, bool csv) {
  const Perturbation p = load_perturbation(input);
  if (csv) {  // (h, M(h)) table for external plotting
    std::printf("h,melnikov\n");
    for (int k = 0; k < std::max(grid, 2); ++k) {
      const double h =
          h_max * std::pow(h_min / h_max, static_cast<double>(grid - 1 - k) / (grid - 1));
      std::printf("%.9g,%.15g\n", h, quad_melnikov(p, EnergyLevel(h), tol).value);
    }
    return 0;
  }
  const SignCountResult res = count_sign_changes(
      [&](double h) { return quad_melnikov(p, EnergyLevel(h), tol); }, h_min, h_max, grid);
  if (json) {
    std::printf("%s\n", ordered_json(res.to_json()).dump(2).c_str());
  } else {
    std::printf("%d sign change(s)\n", res.changes);
    for (const auto& b : res.brackets) std::printf("  zero in [%.9g, %.9g]\n", b.lo, b.hi);
    for (const auto& w : res.warnings) std::printf("  warning: %s\n", w.c_str());
  }
  return 0;
}

void warn_large_epsilon(double epsilon) {
  if (std::fabs(epsilon) > 1e-2)
    std::fprintf(stderr,
                 "warning: epsilon = %g is above 1e-2; first-order Melnikov "
                 "predictions degrade\n", epsilon);
}

int cmd_simulate(const std::string& input, double epsilon, double h, double t_max,
                 double tol, bool csv) {
  warn_large_epsilon(epsilon);
  SystemSpec spec{epsilon, load_perturbation(input)};
  if (csv) {
    const Trajectory traj = integrate(spec, 0.0, std::sqrt(2.0 * h), t_max, tol);
    std::printf("t,x,y,H\n");
    for (const auto& pt : traj.points)
      std::printf("%.12g,%.15g,%.15g,%.15g\n", pt.t, pt.x, pt.y, hamiltonian(pt.x, pt.y));
    if (!traj.ok) {
      std::fprintf(stderr, "integration stopped: %s\n", traj.error.c_str());
      return 1;
    }
    return 0;
  }
  const ReturnSample sample = return_map(spec, h, tol);
  ordered_json out;
  out["schema_version"] = 1;
  out["h_in"] = sample.h_in;
  out["h_out"] = sample.h_out;
  out["displacement"] = sample.h_out - sample.h_in;
  out["flight_time"] = sample.flight_time;
  out["y_crossings"] = sample.y_crossings;
  out["ok"] = sample.ok;
  if (!sample.ok) out["error"] = sample.error;
  std::printf("%s\n", out.dump(2).c_str());
  return sample.ok ? 0 : 1;
}

int cmd_agree(const std::string& input, double epsilon, double h_min, double h_max,
              int grid, double tol, bool csv) {
  warn_large_epsilon(epsilon);
  SystemSpec spec{epsilon, load_perturbation(input)};
  std::vector<double> hs;
  for (int k = 0; k < grid; ++k)
    hs.push_back(h_min + (h_max - h_min) * k / std::max(1, grid - 1));
  const AgreementReport rep = melnikov_agreement(spec, hs, tol);
  if (csv) {
    std::printf("h,d_over_eps,melnikov\n");
    for (const auto& row : rep.rows)
      std::printf("%.9g,%.15g,%.15g\n", row.h, row.d_over_eps, row.melnikov);
  } else {
    ordered_json out;
    out["schema_version"] = 1;
    out["max_abs_deviation"] = rep.max_abs_deviation;
    out["max_rel_deviation"] = rep.max_rel_deviation;
    out["signs_match"] = rep.signs_match;
    ordered_json rows = ordered_json::array();
    for (const auto& row : rep.rows) {
      ordered_json r;
      r["h"] = row.h;
      r["d_over_eps"] = row.d_over_eps;
      r["melnikov"] = row.melnikov;
      rows.push_back(r);
    }
    out["rows"] = rows;
    std::printf("%s\n", out.dump(2).c_str());
  }
  return rep.signs_match ? 0 : 1;
}

int cmd_cycles(const std::string& input, double epsilon, double h_min, double h_max,
               int grid, double tol, bool json) {
  warn_large_epsilon(epsilon);
  SystemSpec spec{epsilon, load_perturbation(input)};
  const CycleSearch res = find_cycles(spec, h_min, h_max, grid, tol);
  if (json) {
    ordered_json out;
    out["schema_version"] = 1;
    ordered_json cycles = ordered_json::array();
    for (const auto& c : res.cycles) {
      ordered_json e;
      e["h_star"] = c.h_star;
      e["h_lo"] = c.h_lo;
      e["h_hi"] = c.h_hi;
      e["stability"] = c.stability;
      cycles.push_back(e);
    }
    out["cycles"] = cycles;
    out["diagnostics"] = res.diagnostics;
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::printf("%zu cycle(s)\n", res.cycles.size());
    for (const auto& c : res.cycles)
      std::printf("  h* = %.9g in [%.9g, %.9g], %s\n", c.h_star, c.h_lo, c.h_hi,
                  c.stability < 0 ? "attracting" : "repelling");
    for (const auto& d : res.diagnostics) std::printf("  note: %s\n", d.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"melkit: Melnikov functions of trigonometrically perturbed pendulums"};
  app.set_help_flag("--help", "print help");  // frees -h for the energy flag
  app.require_subcommand(1);

  std::string input, term = "I", family = "smooth", locations, h_list = "0.1,0.5,1.0";
  int i = 0, j = 1, order = 10, digits = 12, n = 1, m = 2, r = 0, s1 = 1, s_hat = 2;
  int grid = 32, imax = 5, rmax = 4, kmax = 4, fuzz = 0;
  unsigned seed = 1;
  double h = 0.5, tol = 1e-10, h_min = 0.01, h_max = 1.0, epsilon = 1e-4, t_max = 50.0;
  bool json = false, csv = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", json, "machine-readable JSON output");
  };
  auto sub = [&](const char* name, const char* desc) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->set_help_flag("--help", "print help");
    return cmd;
  };

  CLI::App* expand_cmd = sub("expand", "exact series of a perturbation or basis term");
  expand_cmd->add_option("--input", input, "perturbation JSON file");
  expand_cmd->add_option("--term", term, "basis term kind: I, J, L, Lt");
  expand_cmd->add_option("--i", i);
  expand_cmd->add_option("--j", j);
  expand_cmd->add_option("--order", order, "number of ladder terms");
  expand_cmd->add_option("--digits", digits);
  add_common(expand_cmd);

  CLI::App* quad_cmd = sub("quad", "quadrature oracle values");
  quad_cmd->add_option("--input", input);
  quad_cmd->add_option("--term", term);
  quad_cmd->add_option("--i", i);
  quad_cmd->add_option("--j", j);
  quad_cmd->add_option("--h", h);
  quad_cmd->add_option("--tol", tol);
  add_common(quad_cmd);

  CLI::App* id_cmd = sub("identities", "verify the rewrite identity suites");
  id_cmd->add_option("--imax", imax);
  id_cmd->add_option("--rmax", rmax);
  id_cmd->add_option("--kmax", kmax);
  id_cmd->add_option("--order", order);
  id_cmd->add_option("--quad-h", h_list, "comma-separated h values");
  id_cmd->add_option("--tol", tol);
  add_common(id_cmd);

  CLI::App* reduce_cmd = sub("reduce", "canonical form and linear map");
  reduce_cmd->add_option("--input", input);
  reduce_cmd->add_option("--fuzz", fuzz, "random reductions per shape (series-checked)");
  reduce_cmd->add_option("--seed", seed);
  reduce_cmd->add_option("--order", order);
  add_common(reduce_cmd);

  CLI::App* rank_cmd = sub("rank", "D-matrix and Jacobian rank reports");
  rank_cmd->add_option("--family", family)->check(CLI::IsMember({"smooth", "piecewise"}));
  rank_cmd->add_option("--n", n);
  rank_cmd->add_option("--m", m, "m (smooth) or l (piecewise)");
  rank_cmd->add_option("--r", r, "r (smooth) or r_tilde (piecewise)");
  add_common(rank_cmd);

  CLI::App* bound_cmd = sub("bound", "sharp zero-count bound");
  bound_cmd->add_option("--family", family)->check(CLI::IsMember({"smooth", "piecewise"}));
  bound_cmd->add_option("--n", n);
  bound_cmd->add_option("--m", m);
  bound_cmd->add_option("--s1", s1);
  bound_cmd->add_option("--shat", s_hat);

  CLI::App* realize_cmd = sub("realize", "construct a sharp-bound perturbation");
  realize_cmd->add_option("--family", family)->check(CLI::IsMember({"smooth", "piecewise"}));
  realize_cmd->add_option("--n", n);
  realize_cmd->add_option("--m", m);
  realize_cmd->add_option("--r", r);
  realize_cmd->add_option("--s1", s1);
  realize_cmd->add_option("--shat", s_hat);
  realize_cmd->add_option("--locations", locations, "comma-separated zero locations")->required();
  add_common(realize_cmd);

  CLI::App* zeros_cmd = sub("zeros", "sign changes of the Melnikov function");
  zeros_cmd->add_option("--input", input)->required();
  zeros_cmd->add_option("--h-min", h_min);
  zeros_cmd->add_option("--h-max", h_max);
  zeros_cmd->add_option("--grid", grid);
  zeros_cmd->add_option("--tol", tol);
  zeros_cmd->add_flag("--csv", csv, "emit (h, M(h)) as CSV");
  add_common(zeros_cmd);

  CLI::App* sim_cmd = sub("simulate", "trajectory (--csv) or return-map sample");
  sim_cmd->add_option("--input", input)->required();
  sim_cmd->add_option("--epsilon", epsilon);
  sim_cmd->add_option("--h", h);
  sim_cmd->add_option("--t-max", t_max);
  sim_cmd->add_option("--tol", tol);
  sim_cmd->add_flag("--csv", csv, "emit the trajectory as CSV (t, x, y, H)");

  CLI::App* agree_cmd = sub("agree", "return-map displacement vs Melnikov table");
  agree_cmd->add_option("--input", input)->required();
  agree_cmd->add_option("--epsilon", epsilon);
  agree_cmd->add_option("--h-min", h_min);
  agree_cmd->add_option("--h-max", h_max);
  agree_cmd->add_option("--grid", grid);
  agree_cmd->add_option("--tol", tol);
  agree_cmd->add_flag("--csv", csv, "emit (h, d/eps, M) as CSV");

  CLI::App* cycles_cmd = sub("cycles", "limit-cycle search via the return map");
  cycles_cmd->add_option("--input", input)->required();
  cycles_cmd->add_option("--epsilon", epsilon);
  cycles_cmd->add_option("--h-min", h_min);
  cycles_cmd->add_option("--h-max", h_max);
  cycles_cmd->add_option("--grid", grid);
  cycles_cmd->add_option("--tol", tol);
  add_common(cycles_cmd);

  try {
    app.parse(argc, argv);
    if (expand_cmd->parsed()) return cmd_expand(input, term, i, j, order, digits, json);
    if (quad_cmd->parsed()) return cmd_quad(input, term, i, j, h, tol, json);
    if (id_cmd->parsed()) return cmd_identities(imax, rmax, kmax, order, h_list, tol, json);
    if (reduce_cmd->parsed()) return cmd_reduce(input, fuzz, seed, order, json);
    if (rank_cmd->parsed()) return cmd_rank(family, n, m, r, json);
    if (bound_cmd->parsed()) return cmd_bound(family, n, m, s1, s_hat);
    if (realize_cmd->parsed()) return cmd_realize(family, n, m, r, s1, s_hat, locations, json);
    if (zeros_cmd->parsed()) return cmd_zeros(input, h_min, h_max, grid, tol, json, csv);
    if (sim_cmd->parsed()) return cmd_simulate(input, epsilon, h, t_max, tol, csv);
    if (agree_cmd->parsed()) return cmd_agree(input, epsilon, h_min, h_max, grid, tol, csv);
    if (cycles_cmd->parsed()) return cmd_cycles(input, epsilon, h_min, h_max, grid, tol, json);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
