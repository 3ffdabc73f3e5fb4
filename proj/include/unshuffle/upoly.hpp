#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "unshuffle/rational.hpp"

namespace unshuffle {

/// Dense univariate polynomial over Q, coefficients in ascending degree.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);

  static UPoly monomial(std::size_t degree, const Rational& c = 1);

  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& t) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const Rational& s, const UPoly& a);
  friend bool operator==(const UPoly&, const UPoly&) = default;

  /// Quotient and remainder; throws UsageError on division by zero.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd (zero if both inputs are zero).
UPoly gcd(UPoly a, UPoly b);

/// p / gcd(p, p'), made monic.
UPoly squarefree_part(const UPoly& p);

/// Newton-form interpolation through (nodes[k], values[k]); nodes distinct.
UPoly interpolate(std::span<const Rational> nodes, std::span<const Rational> values);

}  // namespace unshuffle
