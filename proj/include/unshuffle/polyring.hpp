#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unshuffle/errors.hpp"
#include "unshuffle/rational.hpp"

namespace unshuffle {

enum class MonomialOrder { lex, grevlex };

std::string_view to_string(MonomialOrder order);

using Exponent = std::uint32_t;

/// Dense exponent vector. The arity is fixed by the ring the monomial lives in.
class Monomial {
 public:
  Monomial() = default;
  /// The monomial 1 in `arity` variables.
  explicit Monomial(std::size_t arity) : exps_(arity, 0) {}
  explicit Monomial(std::vector<Exponent> exps);
  Monomial(std::initializer_list<Exponent> exps) : Monomial(std::vector<Exponent>(exps)) {}

  static Monomial variable(std::size_t arity, std::size_t index, Exponent power = 1);

  std::size_t arity() const { return exps_.size(); }
  std::uint64_t degree() const { return degree_; }
  Exponent operator[](std::size_t i) const { return exps_[i]; }
  std::span<const Exponent> exponents() const { return exps_; }

  bool is_one() const { return degree_ == 0; }
  /// True when *this divides `other`.
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b.divides(a).
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial lcm(const Monomial& a, const Monomial& b);

  /// Structural comparison only (usable as a map key); not a monomial order.
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial& a, const Monomial& b) { return a.exps_ <=> b.exps_; }

 private:
  std::vector<Exponent> exps_;
  std::uint64_t degree_ = 0;
};

/// Three-way comparison in the given order: negative if a < b, zero if equal.
int compare(const Monomial& a, const Monomial& b, MonomialOrder order);

/// All C(degree+arity-1, arity-1) monomials of the given total degree,
/// sorted descending in `order`.
std::vector<Monomial> monomials_of_degree(std::size_t arity, unsigned degree,
                                          MonomialOrder order = MonomialOrder::grevlex);

/// "x1^e1*...*xn^en", every variable written out.
std::string format_monomial(const Monomial& m);

template <class K>
struct CoeffOps;

template <>
struct CoeffOps<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& c) { return sgn(c) == 0; }
  static std::string format(const Rational& c) { return to_string(c); }
  static Rational parse(std::string_view s) { return parse_rational(s); }
};

template <>
struct CoeffOps<double> {
  static constexpr bool exact = false;
  static bool is_zero(double c) { return c == 0.0; }
  static std::string format(double c) { return format_double(c); }
  static double parse(std::string_view s) { return parse_double(s); }
};

template <class K>
struct Term {
  Monomial mono;
  K coeff;
};

/// Sparse multivariate polynomial over K (Rational or double).
///
/// Terms are kept sorted descending in the polynomial's monomial order with
/// no zero coefficients and no repeated monomials.
template <class K>
class Poly {
 public:
  using Coeff = K;

  Poly() = default;
  explicit Poly(std::size_t arity, MonomialOrder order = MonomialOrder::grevlex)
      : arity_(arity), order_(order) {}

  static Poly from_terms(std::size_t arity, std::vector<Term<K>> terms,
                         MonomialOrder order = MonomialOrder::grevlex) {
    Poly p(arity, order);
    for (const auto& t : terms) {
      if (t.mono.arity() != arity) throw UsageError("monomial arity mismatch");
    }
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  static Poly constant(std::size_t arity, const K& c, MonomialOrder order = MonomialOrder::grevlex) {
    return from_terms(arity, {Term<K>{Monomial(arity), c}}, order);
  }

  static Poly variable(std::size_t arity, std::size_t index,
                       MonomialOrder order = MonomialOrder::grevlex) {
    if (index >= arity) throw UsageError("variable index out of range");
    return from_terms(arity, {Term<K>{Monomial::variable(arity, index), K(1)}}, order);
  }

  static Poly monomial(const Monomial& m, const K& c, MonomialOrder order = MonomialOrder::grevlex) {
    return from_terms(m.arity(), {Term<K>{m, c}}, order);
  }

  std::size_t arity() const { return arity_; }
  MonomialOrder order() const { return order_; }
  std::span<const Term<K>> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

  const Term<K>& leading_term() const { return terms_.front(); }
  const Monomial& leading_monomial() const { return terms_.front().mono; }
  const K& leading_coeff() const { return terms_.front().coeff; }

  std::uint64_t total_degree() const {
    std::uint64_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree());
    return d;
  }

  bool is_homogeneous() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Term<K>& t) { return t.mono.degree() == terms_.front().mono.degree(); });
  }

  /// Copy without the leading term.
  Poly tail() const {
    Poly p(arity_, order_);
    if (!terms_.empty()) p.terms_.assign(terms_.begin() + 1, terms_.end());
    return p;
  }

  K coefficient(const Monomial& m) const {
    for (const auto& t : terms_) {
      if (t.mono == m) return t.coeff;
    }
    return K(0);
  }

  Poly with_order(MonomialOrder order) const {
    Poly p = *this;
    p.order_ = order;
    p.sort_terms();
    return p;
  }

  Poly operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, K(1)); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, K(-1)); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_compatible(a, b);
    Poly p(a.arity_, a.order_);
    p.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_) {
      for (const auto& t : b.terms_) p.terms_.push_back(Term<K>{s.mono * t.mono, K(s.coeff * t.coeff)});
    }
    p.normalize();
    return p;
  }

  friend Poly operator*(const K& c, const Poly& a) {
    if (CoeffOps<K>::is_zero(c)) return Poly(a.arity_, a.order_);
    Poly p = a;
    for (auto& t : p.terms_) t.coeff = K(t.coeff * c);
    p.drop_zeros();
    return p;
  }

  Poly& operator+=(const Poly& b) { return *this = *this + b; }
  Poly& operator-=(const Poly& b) { return *this = *this - b; }
  Poly& operator*=(const Poly& b) { return *this = *this * b; }

  /// this + c * m * g, computed by a single ordered merge.
  Poly add_scaled(const K& c, const Monomial& m, const Poly& g) const {
    check_compatible(*this, g);
    Poly out(arity_, order_);
    out.terms_.reserve(terms_.size() + g.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < g.terms_.size()) {
      if (j == g.terms_.size()) {
        out.terms_.push_back(terms_[i++]);
        continue;
      }
      Monomial shifted = g.terms_[j].mono * m;
      int cmp = i == terms_.size() ? -1 : compare(terms_[i].mono, shifted, order_);
      if (cmp > 0) {
        out.terms_.push_back(terms_[i++]);
      } else if (cmp < 0) {
        out.terms_.push_back(Term<K>{std::move(shifted), K(c * g.terms_[j].coeff)});
        ++j;
      } else {
        K sum = terms_[i].coeff + c * g.terms_[j].coeff;
        if (!CoeffOps<K>::is_zero(sum)) out.terms_.push_back(Term<K>{std::move(shifted), sum});
        ++i;
        ++j;
      }
    }
    return out;
  }

  /// Value at `point`; exact for Rational coefficients.
  K eval(std::span<const K> point) const {
    if (point.size() != arity_) throw UsageError("evaluation point length does not match arity");
    K total(0);
    for (const auto& t : terms_) {
      K v = t.coeff;
      for (std::size_t i = 0; i < arity_; ++i) {
        for (Exponent e = 0; e < t.mono[i]; ++e) v *= point[i];
      }
      total += v;
    }
    return total;
  }

  /// Formal partial derivative with respect to variable `var`.
  Poly diff(std::size_t var) const {
    if (var >= arity_) throw UsageError("derivative index out of range");
    Poly p(arity_, order_);
    for (const auto& t : terms_) {
      Exponent e = t.mono[var];
      if (e == 0) continue;
      std::vector<Exponent> exps(t.mono.exponents().begin(), t.mono.exponents().end());
      exps[var] = e - 1;
      p.terms_.push_back(Term<K>{Monomial(std::move(exps)), K(t.coeff * K(e))});
    }
    p.normalize();
    return p;
  }

  /// Makes the leading coefficient 1. No-op on the zero polynomial.
  Poly monic() const {
    if (is_zero()) return *this;
    K inv = K(1) / leading_coeff();
    return inv * *this;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.arity_ != b.arity_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
  }

  /// Terms as `coeff*x1^e1*...*xn^en` joined by " + "; "0" for the zero polynomial.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += " + ";
      out += CoeffOps<K>::format(terms_[i].coeff);
      out += '*';
      out += format_monomial(terms_[i].mono);
    }
    return out;
  }

  static Poly parse(std::string_view text, std::size_t arity,
                    MonomialOrder order = MonomialOrder::grevlex) {
    Poly p(arity, order);
    if (text == "0") return p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t next = text.find(" + ", pos);
      std::string_view chunk = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
      p.terms_.push_back(parse_term(chunk, arity));
      if (next == std::string_view::npos) break;
      pos = next + 3;
    }
    p.normalize();
    return p;
  }

  /// Re-sorts and merges; exposed so tests can check idempotence.
  void normalize() {
    sort_terms();
    std::vector<Term<K>> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().mono == t.mono) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(std::move(t));
      }
    }
    terms_ = std::move(merged);
    drop_zeros();
  }

 private:
  static void check_compatible(const Poly& a, const Poly& b) {
    if (a.arity_ != b.arity_) throw UsageError("polynomial arity mismatch");
    if (a.order_ != b.order_) throw UsageError("polynomial monomial order mismatch");
  }

  static Poly merge(const Poly& a, const Poly& b, const K& sign) {
    check_compatible(a, b);
    return a.add_scaled(sign, Monomial(a.arity_), b);
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [&](const Term<K>& s, const Term<K>& t) { return compare(s.mono, t.mono, order_) > 0; });
  }

  void drop_zeros() {
    std::erase_if(terms_, [](const Term<K>& t) { return CoeffOps<K>::is_zero(t.coeff); });
  }

  static Term<K> parse_term(std::string_view chunk, std::size_t arity) {
    std::size_t star = chunk.find('*');
    std::vector<Exponent> exps(arity, 0);
    K coeff = CoeffOps<K>::parse(chunk.substr(0, star));
    while (star != std::string_view::npos) {
      std::size_t next = chunk.find('*', star + 1);
      std::string_view factor = chunk.substr(star + 1, next == std::string_view::npos ? std::string_view::npos
                                                                                    : next - star - 1);
      if (factor.size() < 2 || factor[0] != 'x') throw UsageError("malformed monomial factor");
      std::size_t caret = factor.find('^');
      std::size_t var = std::stoul(std::string(factor.substr(1, caret == std::string_view::npos ? std::string_view::npos : caret - 1)));
      Exponent e = caret == std::string_view::npos ? 1 : static_cast<Exponent>(std::stoul(std::string(factor.substr(caret + 1))));
      if (var < 1 || var > arity) throw UsageError("variable index out of range in polynomial text");
      exps[var - 1] += e;
      star = next;
    }
    return Term<K>{Monomial(std::move(exps)), coeff};
  }

  std::size_t arity_ = 0;
  MonomialOrder order_ = MonomialOrder::grevlex;
  std::vector<Term<K>> terms_;
};

using QPoly = Poly<Rational>;
using FPoly = Poly<double>;

}  // namespace unshuffle
