#include "unshuffle/macaulay.hpp"

#include <map>
#include <numeric>

#include "unshuffle/errors.hpp"
#include "unshuffle/symfun.hpp"

namespace unshuffle {

namespace {

std::map<Monomial, std::size_t> index_of(const std::vector<Monomial>& monos) {
  std::map<Monomial, std::size_t> idx;
  for (std::size_t k = 0; k < monos.size(); ++k) idx.emplace(monos[k], k);
  return idx;
}

unsigned checked_degree(const QPoly& f) {
  if (f.is_zero()) throw UsageError("resultant input must be nonzero");
  if (!f.is_homogeneous()) throw UsageError("resultant input must be homogeneous");
  return static_cast<unsigned>(f.total_degree());
}

unsigned critical_degree(std::span<const QPoly> polys) {
  unsigned l = 1;
  for (const auto& f : polys) l += checked_degree(f) - 1;
  return l;
}

void check_square_system(std::span<const QPoly> polys) {
  if (polys.empty()) throw UsageError("need at least one form");
  for (const auto& f : polys) {
    if (f.arity() != polys.size()) throw UsageError("need as many forms as variables");
  }
}

unsigned long factorial(unsigned long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

MacaulayMatrix macaulay_at_degree(std::span<const QPoly> polys, unsigned degree) {
  if (polys.empty()) throw UsageError("need at least one form");
  const std::size_t arity = polys.front().arity();
  MacaulayMatrix mm;
  mm.degree = degree;
  for (const auto& f : polys) {
    if (f.arity() != arity) throw UsageError("forms differ in arity");
    mm.degrees.push_back(checked_degree(f));
  }
  mm.rows = monomials_of_degree(arity, degree);
  const auto row_index = index_of(mm.rows);
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (mm.degrees[i] > degree) continue;
    for (auto& w : monomials_of_degree(arity, degree - mm.degrees[i])) mm.cols.push_back({i, std::move(w)});
  }
  mm.entries = QMatrix(mm.rows.size(), mm.cols.size());
  for (std::size_t c = 0; c < mm.cols.size(); ++c) {
    const auto& col = mm.cols[c];
    for (const auto& t : polys[col.generator].terms()) mm.entries(row_index.at(t.mono * col.multiplier), c) = t.coeff;
  }
  return mm;
}

MacaulayMatrix build_macaulay(std::span<const QPoly> polys, std::span<const unsigned> degrees) {
  check_square_system(polys);
  for (std::size_t i = 0; i < degrees.size() && i < polys.size(); ++i) {
    if (checked_degree(polys[i]) != degrees[i]) throw UsageError("declared degree does not match form");
  }
  if (!degrees.empty() && degrees.size() != polys.size()) throw UsageError("one degree per form required");
  return macaulay_at_degree(polys, critical_degree(polys));
}

bool regular_sequence_test(const QMatrix& a) {
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() < n) throw UsageError("regular sequence test needs m ≥ n ≥ 1");
  std::vector<QPoly> forms;
  for (std::size_t i = 1; i <= n; ++i) forms.push_back(expand_power_sum_pullback(a, static_cast<int>(i)));
  // A zero form cannot be part of a regular sequence (and has no degree).
  if (std::any_of(forms.begin(), forms.end(), [](const QPoly& f) { return f.is_zero(); })) return false;
  const MacaulayMatrix mm = macaulay_at_degree(forms, static_cast<unsigned>(n * (n - 1) / 2 + 1));
  // Full rank modulo a prime implies full rank over Q; only a deficient
  // modular rank needs the exact computation.
  for (std::uint64_t p : {9223372036854775783ULL, 4611686018427387847ULL}) {
    if (auto r = rank_mod_p(mm.entries, p); r && *r == mm.rows.size()) return true;
  }
  return rank(mm.entries) == mm.rows.size();
}

Rational resultant_eval(std::span<const QPoly> polys) {
  check_square_system(polys);
  const std::size_t a = polys.size();
  std::vector<unsigned> deg;
  for (const auto& f : polys) deg.push_back(checked_degree(f));
  const unsigned l = critical_degree(polys);

  const std::vector<Monomial> monos = monomials_of_degree(a, l);
  const auto idx = index_of(monos);
  // Column for monomial alpha: (alpha / t_i^{l_i}) * f_i with i the first
  // variable whose power divides alpha. alpha is "reduced" when exactly one
  // such i exists; M' keeps the rows and columns of non-reduced monomials.
  QMatrix m(monos.size(), monos.size());
  std::vector<std::size_t> non_reduced;
  for (std::size_t c = 0; c < monos.size(); ++c) {
    const Monomial& alpha = monos[c];
    std::size_t first = a;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < a; ++i) {
      if (alpha[i] >= deg[i]) {
        if (first == a) first = i;
        ++hits;
      }
    }
    if (hits > 1) non_reduced.push_back(c);
    const Monomial w = alpha / Monomial::variable(a, first, deg[first]);
    for (const auto& t : polys[first].terms()) m(idx.at(t.mono * w), c) = t.coeff;
  }
  Rational num = determinant(m);
  Rational den = non_reduced.empty() ? Rational(1) : determinant(m.select(non_reduced, non_reduced));
  if (sgn(den) == 0) throw DegenerateInput("denominator degenerate");
  return num / den;
}

Rational resultant_by_minors(std::span<const QPoly> polys) {
  check_square_system(polys);
  if (polys.size() > 2) throw UsageError("maximal-minor resultant only for a ≤ 2");
  const MacaulayMatrix mm = build_macaulay(polys);
  return determinant(mm.entries);
}

std::vector<QPoly> augmented_forms(const QMatrix& a, std::span<const Rational> r) {
  const std::size_t n = a.cols();
  if (r.size() != n + 1) throw UsageError("need n+1 values r_1..r_{n+1}");
  QMatrix padded(a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) padded(i, j) = a(i, j);
  }
  std::vector<QPoly> forms;
  for (std::size_t i = 1; i <= n + 1; ++i) {
    QPoly f = expand_power_sum_pullback(padded, static_cast<int>(i));
    Monomial top = Monomial::variable(n + 1, n, static_cast<Exponent>(i));
    forms.push_back(f - QPoly::monomial(top, r[i - 1]));
  }
  return forms;
}

EliminantResult eliminant(const QMatrix& a, std::span<const Rational> r_fixed, const EliminantOptions& opts) {
  const std::size_t n = a.cols();
  if (n == 0 || a.rows() < n) throw UsageError("eliminant needs m ≥ n ≥ 1");
  if (n > 2 && !opts.allow_large) throw CapExceeded("n > 2 for the eliminant");
  if (r_fixed.size() != n) throw UsageError("need n fixed values r_1..r_n");

  EliminantResult res;
  res.expected_degree = factorial(n);
  const std::size_t needed = res.expected_degree + 2;
  std::vector<Rational> r(r_fixed.begin(), r_fixed.end());
  r.push_back(0);

  std::vector<Rational> values;
  long k = 0;
  int failures = 0;
  while (res.evaluation_points.size() < needed) {
    // 0, 1, -1, 2, -2, ...
    Rational node = k == 0 ? Rational(0) : Rational(k % 2 ? (k + 1) / 2 : -(k / 2));
    ++k;
    r.back() = node;
    res.attempted_points.push_back(node);
    try {
      values.push_back(resultant_eval(augmented_forms(a, r)));
      res.evaluation_points.push_back(node);
      res.denominator_ok.push_back(true);
    } catch (const DegenerateInput&) {
      res.denominator_ok.push_back(false);
      if (++failures > opts.retry_budget) throw DegenerateInput("denominator degenerate at too many nodes");
    }
  }
  res.poly = interpolate(res.evaluation_points, values);
  return res;
}

nlohmann::ordered_json to_json(const EliminantResult& res) {
  nlohmann::ordered_json j;
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& c : res.poly.coeffs()) coeffs.push_back(to_string(c));
  j["coefficients"] = std::move(coeffs);
  j["degree"] = res.poly.degree();
  j["expected_degree"] = res.expected_degree;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& c : res.evaluation_points) nodes.push_back(to_string(c));
  j["evaluation_points"] = std::move(nodes);
  auto attempted = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < res.attempted_points.size(); ++k) {
    attempted.push_back({{"node", to_string(res.attempted_points[k])}, {"denominator_ok", res.denominator_ok[k]}});
  }
  j["attempted_points"] = std::move(attempted);
  return j;
}

}  // namespace unshuffle
