#include "unshuffle/symfun.hpp"

namespace unshuffle {

ElementarySymmetricVector newton_p_to_e(const PowerSumVector& p) {
  const std::size_t len = p.values.size();
  if (len == 0) throw UsageError("power-sum vector must be non-empty");
  std::vector<Rational> s(len + 1);
  s[0] = 1;
  for (std::size_t l = 1; l <= len; ++l) {
    Rational acc = 0;
    for (std::size_t i = 1; i <= l; ++i) {
      Rational term = s[l - i] * p.values[i - 1];
      if (i % 2 == 1) acc += term; else acc -= term;
    }
    s[l] = acc / Rational(static_cast<long>(l));
  }
  return {std::vector<Rational>(s.begin() + 1, s.end())};
}

PowerSumVector newton_e_to_p(const ElementarySymmetricVector& e) {
  const std::size_t len = e.values.size();
  if (len == 0) throw UsageError("elementary symmetric vector must be non-empty");
  std::vector<Rational> p(len);
  for (std::size_t l = 1; l <= len; ++l) {
    Rational acc = Rational(static_cast<long>(l)) * e.values[l - 1];
    if (l % 2 == 0) acc = -acc;
    for (std::size_t i = 1; i < l; ++i) {
      Rational term = e.values[i - 1] * p[l - i - 1];
      if (i % 2 == 1) acc += term; else acc -= term;
    }
    p[l - 1] = acc;
  }
  return {std::move(p)};
}

QPoly row_linear_form(const QMatrix& a, std::size_t i, MonomialOrder order) {
  const std::size_t n = a.cols();
  std::vector<Term<Rational>> terms;
  for (std::size_t j = 0; j < n; ++j) terms.push_back({Monomial::variable(n, j), a(i, j)});
  return QPoly::from_terms(n, std::move(terms), order);
}

QPoly expand_power_sum_pullback(const QMatrix& a, int ell, MonomialOrder order) {
  if (a.empty()) throw UsageError("empty matrix");
  if (ell <= 0) throw UsageError("power sum order must be positive");
  QPoly total(a.cols(), order);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    total += pow(row_linear_form(a, i, order), static_cast<unsigned>(ell));
  }
  return total;
}

}  // namespace unshuffle
