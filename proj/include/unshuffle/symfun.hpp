#pragma once

#include <span>
#include <vector>

#include "unshuffle/errors.hpp"
#include "unshuffle/polyring.hpp"
#include "unshuffle/qmatrix.hpp"

namespace unshuffle {

/// (p_1, ..., p_L), p_l the l-th power sum of some multiset.
struct PowerSumVector {
  std::vector<Rational> values;
};

/// (s_1, ..., s_L), s_i the i-th elementary symmetric polynomial of the same multiset.
struct ElementarySymmetricVector {
  std::vector<Rational> values;
};

/// sum_i v_i^ell. Works for Rational and double.
template <class K>
K power_sum(int ell, std::span<const K> v) {
  if (ell <= 0) throw UsageError("power sum order must be positive");
  K total(0);
  for (const K& x : v) {
    K p = x;
    for (int k = 1; k < ell; ++k) p *= x;
    total += p;
  }
  return total;
}

/// Newton's identities, power sums to elementary symmetric functions:
/// l * s_l = sum_{i=1..l} (-1)^(i-1) s_{l-i} p_i, with s_0 = 1.
ElementarySymmetricVector newton_p_to_e(const PowerSumVector& p);

/// Inverse of newton_p_to_e:
/// p_l = (-1)^(l-1) l s_l + sum_{i=1..l-1} (-1)^(i-1) s_i p_{l-i}.
PowerSumVector newton_e_to_p(const ElementarySymmetricVector& e);

/// p_ell(A x) = sum_i (a_i . x)^ell expanded in the n variables x,
/// A given as an m x n rational matrix.
QPoly expand_power_sum_pullback(const QMatrix& a, int ell,
                                MonomialOrder order = MonomialOrder::grevlex);

/// The linear form sum_j a_ij x_j of row i.
QPoly row_linear_form(const QMatrix& a, std::size_t i, MonomialOrder order = MonomialOrder::grevlex);

/// Integer power by repeated squaring.
template <class K>
Poly<K> pow(const Poly<K>& base, unsigned e) {
  Poly<K> result = Poly<K>::constant(base.arity(), K(1), base.order());
  Poly<K> b = base;
  while (e) {
    if (e & 1u) result = result * b;
    e >>= 1u;
    if (e) b = b * b;
  }
  return result;
}

}  // namespace unshuffle
