#include "melkit/perturbation.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace melkit {

namespace {

double horner_cos(const std::vector<Rational>& coeffs, double c) {
  double acc = 0.0;
  for (size_t k = coeffs.size(); k-- > 0;) acc = acc * c + coeffs[k].get_d();
  return acc;
}

}  // namespace

double TrigPoly::eval(double x) const {
  const double c = std::cos(x);
  double v = horner_cos(a, c);
  if (!a_tilde.empty()) v += std::sin(x) * horner_cos(a_tilde, c);
  return v;
}

bool TrigPoly::is_zero() const {
  for (const auto& q : a)
    if (q != 0) return false;
  for (const auto& q : a_tilde)
    if (q != 0) return false;
  return true;
}

double CosBasisPoly::eval(double x) const {
  const double w = 1.0 - std::cos(x);
  double acc = 0.0;
  for (size_t k = ctilde.size(); k-- > 0;) acc = acc * w + ctilde[k].get_d();
  return acc;
}

CosBasisPoly even_part_to_cos_basis(const TrigPoly& q) {
  // cos^i x = (1 - w)^i = sum_q C(i,q) (-1)^q w^q,  w = 1 - cos x.
  CosBasisPoly out;
  out.ctilde.assign(q.a.size(), Rational(0));
  for (size_t i = 0; i < q.a.size(); ++i) {
    if (q.a[i] == 0) continue;
    for (size_t p = 0; p <= i; ++p) {
      Rational term = q.a[i] * Rational(binomial(static_cast<long>(i), static_cast<long>(p)));
      if (p % 2 == 1) term = -term;
      out.ctilde[p] += term;
    }
  }
  return out;
}

std::vector<Rational> cos_powers_from_w_basis(const std::vector<Rational>& ctilde) {
  // (1 - cos x)^q = sum_i C(q,i) (-1)^i cos^i x.
  std::vector<Rational> a(ctilde.size(), Rational(0));
  for (size_t q = 0; q < ctilde.size(); ++q) {
    if (ctilde[q] == 0) continue;
    for (size_t i = 0; i <= q; ++i) {
      Rational term = ctilde[q] * Rational(binomial(static_cast<long>(q), static_cast<long>(i)));
      if (i % 2 == 1) term = -term;
      a[i] += term;
    }
  }
  return a;
}

void SmoothPerturbation::validate() const {
  if (n < 0) throw std::invalid_argument("perturbation: n must be >= 0");
  if (s1 < 1 || s1 > s2) throw std::invalid_argument("perturbation: need 1 <= s1 <= s2");
  if (q.size() != static_cast<size_t>(s2 - s1 + 1))
    throw std::invalid_argument("perturbation: power table size mismatch");
  for (const auto& poly : q) {
    if (poly.a.size() != static_cast<size_t>(n + 1))
      throw std::invalid_argument("perturbation: a-table must have exactly n+1 rows");
    if (!poly.a_tilde.empty() && poly.a_tilde.size() != static_cast<size_t>(n))
      throw std::invalid_argument("perturbation: a_tilde-table must have exactly n rows");
  }
}

double SmoothPerturbation::eval(double x, double y) const {
  double acc = 0.0;
  double yp = std::pow(y, s1);
  for (int s = s1; s <= s2; ++s) {
    acc += at_power(s).eval(x) * yp;
    yp *= y;
  }
  return acc;
}

void PiecewisePerturbation::validate() const {
  if (n < 0) throw std::invalid_argument("perturbation: n must be >= 0");
  if (s1 < 1 || s2 < s1 || s3 < s1)
    throw std::invalid_argument("perturbation: need 1 <= s1 <= s2 and s1 <= s3");
  if (plus.size() != static_cast<size_t>(s2 - s1 + 1))
    throw std::invalid_argument("perturbation: plus-side table size mismatch");
  if (minus.size() != static_cast<size_t>(s3 - s1 + 1))
    throw std::invalid_argument("perturbation: minus-side table size mismatch");
  for (const auto* side : {&plus, &minus})
    for (const auto& poly : *side) {
      if (poly.a.size() != static_cast<size_t>(n + 1))
        throw std::invalid_argument("perturbation: a-table must have exactly n+1 rows");
      if (!poly.a_tilde.empty() && poly.a_tilde.size() != static_cast<size_t>(n))
        throw std::invalid_argument("perturbation: a_tilde-table must have exactly n rows");
    }
}

double PiecewisePerturbation::eval(double x, double y, int side) const {
  const auto& table = side >= 0 ? plus : minus;
  const int stop = side >= 0 ? s2 : s3;
  double acc = 0.0;
  double yp = std::pow(y, s1);
  for (int s = s1; s <= stop; ++s) {
    acc += table[static_cast<size_t>(s - s1)].eval(x) * yp;
    yp *= y;
  }
  return acc;
}

double eval_perturbation(const Perturbation& p, double x, double y, int side) {
  if (const auto* sp = std::get_if<SmoothPerturbation>(&p)) return sp->eval(x, y);
  return std::get<PiecewisePerturbation>(p).eval(x, y, side);
}

namespace {

Rational entry_to_rational(const nlohmann::json& v, const std::string& where) {
  if (v.is_string()) return rational_from_string(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw std::invalid_argument("perturbation: " + where +
                              " entries must be \"p/q\" strings or integers");
}

/** Reads the i-major tables "a" (required) and "a_tilde" (optional)
 *  into per-power TrigPolys, converting from the (1-cos)^i basis when
 *  requested. */
std::vector<TrigPoly> read_tables(const nlohmann::json& doc, int n, int cols,
                                  bool w_basis, const std::string& where) {
  if (!doc.contains("a")) throw std::invalid_argument("perturbation: " + where + ".a required");
  const auto& a = doc.at("a");
  if (!a.is_array() || a.size() != static_cast<size_t>(n + 1))
    throw std::invalid_argument("perturbation: " + where + ".a must have exactly n+1 rows (i = 0..n)");

  std::vector<std::vector<Rational>> rows(static_cast<size_t>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const auto& row = a.at(static_cast<size_t>(i));
    if (!row.is_array() || row.size() != static_cast<size_t>(cols))
      throw std::invalid_argument("perturbation: " + where + ".a row " + std::to_string(i) +
                                  " must have s2-s1+1 columns");
    for (int c = 0; c < cols; ++c)
      rows[static_cast<size_t>(i)].push_back(
          entry_to_rational(row.at(static_cast<size_t>(c)), where + ".a"));
  }

  std::vector<std::vector<Rational>> trows;
  if (doc.contains("a_tilde") && !doc.at("a_tilde").is_null()) {
    const auto& at = doc.at("a_tilde");
    if (!at.is_array() || at.size() != static_cast<size_t>(n))
      throw std::invalid_argument("perturbation: " + where + ".a_tilde must have exactly n rows (i = 0..n-1)");
    trows.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto& row = at.at(static_cast<size_t>(i));
      if (!row.is_array() || row.size() != static_cast<size_t>(cols))
        throw std::invalid_argument("perturbation: " + where + ".a_tilde row " + std::to_string(i) +
                                    " must have s2-s1+1 columns");
      for (int c = 0; c < cols; ++c)
        trows[static_cast<size_t>(i)].push_back(
            entry_to_rational(row.at(static_cast<size_t>(c)), where + ".a_tilde"));
    }
  }

  std::vector<TrigPoly> out(static_cast<size_t>(cols));
  for (int c = 0; c < cols; ++c) {
    auto& poly = out[static_cast<size_t>(c)];
    poly.a.resize(static_cast<size_t>(n + 1));
    for (int i = 0; i <= n; ++i) poly.a[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
    if (w_basis) poly.a = cos_powers_from_w_basis(poly.a);
    if (!trows.empty()) {
      poly.a_tilde.resize(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i)
        poly.a_tilde[static_cast<size_t>(i)] = trows[static_cast<size_t>(i)][static_cast<size_t>(c)];
      if (w_basis) poly.a_tilde = cos_powers_from_w_basis(poly.a_tilde);
    }
  }
  return out;
}

int read_int_field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name))
    throw std::invalid_argument(std::string("perturbation: ") + name + " required");
  if (!doc.at(name).is_number_integer())
    throw std::invalid_argument(std::string("perturbation: ") + name + " must be an integer");
  return doc.at(name).get<int>();
}

nlohmann::json tables_to_json(const std::vector<TrigPoly>& table, int n) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i <= n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& poly : table) row.push_back(to_string(poly.a[static_cast<size_t>(i)]));
    a.push_back(row);
  }
  nlohmann::json out;
  out["a"] = a;
  bool any_tilde = false;
  for (const auto& poly : table) any_tilde = any_tilde || !poly.a_tilde.empty();
  if (any_tilde && n > 0) {
    nlohmann::json at = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (const auto& poly : table)
        row.push_back(poly.a_tilde.empty() ? "0" : to_string(poly.a_tilde[static_cast<size_t>(i)]));
      at.push_back(row);
    }
    out["a_tilde"] = at;
  }
  return out;
}

}  // namespace

Perturbation perturbation_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind"))
    throw std::invalid_argument("perturbation: kind required (\"smooth\" or \"piecewise\")");
  const std::string kind = doc.at("kind").get<std::string>();
  const int n = read_int_field(doc, "n");
  const int s1 = read_int_field(doc, "s1");
  const int s2 = read_int_field(doc, "s2");
  const bool w_basis =
      doc.contains("basis") && doc.at("basis").get<std::string>() == "one_minus_cos";

  if (kind == "smooth") {
    SmoothPerturbation p;
    p.n = n;
    p.s1 = s1;
    p.s2 = s2;
    if (s1 < 1 || s1 > s2) throw std::invalid_argument("perturbation: need 1 <= s1 <= s2");
    p.q = read_tables(doc, n, s2 - s1 + 1, w_basis, "smooth");
    p.validate();
    return p;
  }
  if (kind == "piecewise") {
    if (!doc.contains("s3")) throw std::invalid_argument("perturbation: s3 required");
    PiecewisePerturbation p;
    p.n = n;
    p.s1 = s1;
    p.s2 = s2;
    p.s3 = read_int_field(doc, "s3");
    if (s1 < 1 || s2 < s1 || p.s3 < s1)
      throw std::invalid_argument("perturbation: need 1 <= s1 <= s2 and s1 <= s3");
    if (!doc.contains("plus")) throw std::invalid_argument("perturbation: plus side required");
    if (!doc.contains("minus")) throw std::invalid_argument("perturbation: minus side required");
    p.plus = read_tables(doc.at("plus"), n, s2 - s1 + 1, w_basis, "plus");
    p.minus = read_tables(doc.at("minus"), n, p.s3 - s1 + 1, w_basis, "minus");
    p.validate();
    return p;
  }
  throw std::invalid_argument("perturbation: unknown kind '" + kind + "'");
}

Perturbation load_perturbation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open perturbation file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("perturbation: JSON parse error in " + path + ": " + e.what());
  }
  return perturbation_from_json(doc);
}

nlohmann::json perturbation_to_json(const Perturbation& p) {
  nlohmann::json out;
  if (const auto* sp = std::get_if<SmoothPerturbation>(&p)) {
    out["kind"] = "smooth";
    out["n"] = sp->n;
    out["s1"] = sp->s1;
    out["s2"] = sp->s2;
    out.update(tables_to_json(sp->q, sp->n));
  } else {
    const auto& pp = std::get<PiecewisePerturbation>(p);
    out["kind"] = "piecewise";
    out["n"] = pp.n;
    out["s1"] = pp.s1;
    out["s2"] = pp.s2;
    out["s3"] = pp.s3;
    out["plus"] = tables_to_json(pp.plus, pp.n);
    out["minus"] = tables_to_json(pp.minus, pp.n);
  }
  return out;
}

}  // namespace melkit
