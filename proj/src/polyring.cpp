#include "unshuffle/polyring.hpp"

#include <numeric>

namespace unshuffle {

std::string_view to_string(MonomialOrder order) {
  return order == MonomialOrder::lex ? "lex" : "grevlex";
}

Monomial::Monomial(std::vector<Exponent> exps) : exps_(std::move(exps)) {
  degree_ = std::accumulate(exps_.begin(), exps_.end(), std::uint64_t{0});
}

Monomial Monomial::variable(std::size_t arity, std::size_t index, Exponent power) {
  if (index >= arity) throw UsageError("variable index out of range");
  std::vector<Exponent> exps(arity, 0);
  exps[index] = power;
  return Monomial(std::move(exps));
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] != 0 && other.exps_[i] != 0) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (std::size_t i = 0; i < a.exps_.size(); ++i) out.exps_[i] += b.exps_[i];
  out.degree_ = a.degree_ + b.degree_;
  return out;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial out = a;
  for (std::size_t i = 0; i < a.exps_.size(); ++i) out.exps_[i] -= b.exps_[i];
  out.degree_ = a.degree_ - b.degree_;
  return out;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  std::vector<Exponent> exps(a.exps_.size());
  for (std::size_t i = 0; i < exps.size(); ++i) exps[i] = std::max(a.exps_[i], b.exps_[i]);
  return Monomial(std::move(exps));
}

int compare(const Monomial& a, const Monomial& b, MonomialOrder order) {
  const std::size_t n = a.arity();
  if (order == MonomialOrder::lex) {
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
    }
    return 0;
  }
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  // Equal degree: the monomial with the smaller exponent in the last
  // differing variable is larger.
  for (std::size_t i = n; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

namespace {

void enumerate(std::size_t var, unsigned remaining, std::vector<Exponent>& cur, std::vector<Monomial>& out) {
  if (var + 1 == cur.size()) {
    cur[var] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    cur[var] = e;
    enumerate(var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t arity, unsigned degree, MonomialOrder order) {
  if (arity == 0) throw UsageError("arity must be positive");
  std::vector<Monomial> out;
  std::vector<Exponent> cur(arity, 0);
  enumerate(0, degree, cur, out);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return compare(a, b, order) > 0; });
  return out;
}

std::string format_monomial(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.arity(); ++i) {
    if (i) out += '*';
    out += 'x';
    out += std::to_string(i + 1);
    out += '^';
    out += std::to_string(m[i]);
  }
  return out;
}

}  // namespace unshuffle
