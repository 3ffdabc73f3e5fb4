#pragma once

#include <cstdint>
#include <optional>

#include <cstddef>
#include <span>
#include <vector>

#include "unshuffle/rational.hpp"

namespace unshuffle {

/// Dense row-major matrix over the rationals.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static QMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  static QMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  QMatrix transpose() const;
  QMatrix select(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
  friend QMatrix operator*(const Rational& c, const QMatrix& a);
  friend bool operator==(const QMatrix&, const QMatrix&) = default;

  std::vector<Rational> apply(std::span<const Rational> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
Rational determinant(const QMatrix& m);

/// Exact rank by fraction-free elimination.
std::size_t rank(const QMatrix& m);

/// Rank of m reduced modulo the prime p (p < 2^63), a lower bound for the
/// rational rank. nullopt when p divides some denominator.
std::optional<std::size_t> rank_mod_p(const QMatrix& m, std::uint64_t p);

}  // namespace unshuffle
