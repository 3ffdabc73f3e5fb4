#include "unshuffle/qmatrix.hpp"

#include <utility>

#include "unshuffle/errors.hpp"

namespace unshuffle {

QMatrix QMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  QMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < m.rows_; ++i) {
    if (rows[i].size() != m.cols_) throw UsageError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

QMatrix QMatrix::select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
  QMatrix s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  }
  return s;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw UsageError("matrix product shape mismatch");
  QMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix sum shape mismatch");
  QMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

QMatrix operator*(const Rational& s, const QMatrix& a) {
  QMatrix c = a;
  for (auto& v : c.data_) v *= s;
  return c;
}

std::vector<Rational> QMatrix::apply(std::span<const Rational> v) const {
  if (v.size() != cols_) throw UsageError("matrix-vector shape mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

namespace {

// Integer matrix obtained by scaling each row by the lcm of its denominators.
// `scale` receives the product of those multipliers.
std::vector<std::vector<mpz_class>> clear_denominators(const QMatrix& m, mpz_class& scale) {
  std::vector<std::vector<mpz_class>> z(m.rows(), std::vector<mpz_class>(m.cols()));
  scale = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) z[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
    scale *= l;
  }
  return z;
}

// Fraction-free row echelon reduction in place. Returns the rank and sets
// `sign` to the parity of the row swaps performed.
std::size_t bareiss(std::vector<std::vector<mpz_class>>& z, std::size_t cols, int& sign) {
  const std::size_t rows = z.size();
  mpz_class prev = 1;
  std::size_t r = 0;
  sign = 1;
  mpz_class tmp;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && z[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(z[p], z[r]);
      sign = -sign;
    }
    const mpz_class& piv = z[r][c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const mpz_class lead = z[i][c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        tmp = piv * z[i][j];
        tmp -= lead * z[r][j];
        mpz_divexact(z[i][j].get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      z[i][c] = 0;
    }
    prev = piv;
    ++r;
  }
  return r;
}

}  // namespace

Rational determinant(const QMatrix& m) {
  if (m.rows() != m.cols()) throw UsageError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);
  mpz_class scale;
  auto z = clear_denominators(m, scale);
  int sign = 1;
  if (bareiss(z, n, sign) < n) return Rational(0);
  Rational det(z[n - 1][n - 1] * sign, scale);
  det.canonicalize();
  return det;
}

std::size_t rank(const QMatrix& m) {
  if (m.empty()) return 0;
  mpz_class scale;
  auto z = clear_denominators(m, scale);
  int sign = 1;
  return bareiss(z, m.cols(), sign);
}

std::optional<std::size_t> rank_mod_p(const QMatrix& m, std::uint64_t p) {
  using u128 = unsigned __int128;
  auto mulmod = [p](std::uint64_t a, std::uint64_t b) { return static_cast<std::uint64_t>(u128(a) * b % p); };
  auto powmod = [&](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, b = mulmod(b, b)) {
      if (e & 1) r = mulmod(r, b);
    }
    return r;
  };
  const mpz_class pz(std::to_string(p));
  std::vector<std::vector<std::uint64_t>> z(m.rows(), std::vector<std::uint64_t>(m.cols()));
  mpz_class num, den;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& v = m(i, j);
      if (v == 0) continue;
      num = v.get_num() % pz;
      if (num < 0) num += pz;
      den = v.get_den() % pz;
      if (den == 0) return std::nullopt;
      const std::uint64_t nu = std::stoull(num.get_str()), de = std::stoull(den.get_str());
      z[i][j] = mulmod(nu, powmod(de, p - 2));
    }
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && z[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(z[piv], z[r]);
    const std::uint64_t inv = powmod(z[r][c], p - 2);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (z[i][c] == 0) continue;
      const std::uint64_t f = mulmod(z[i][c], inv);
      for (std::size_t j = c; j < m.cols(); ++j) {
        z[i][j] = (z[i][j] + p - mulmod(f, z[r][j])) % p;
      }
    }
    ++r;
  }
  return r;
}

}  // namespace unshuffle
