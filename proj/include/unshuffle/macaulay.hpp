#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "unshuffle/polyring.hpp"
#include "unshuffle/qmatrix.hpp"
#include "unshuffle/upoly.hpp"

namespace unshuffle {

struct MacaulayColumn {
  std::size_t generator;  // 0-based index i of f_i
  Monomial multiplier;    // w, of degree l - l_i
};

/// Coefficient matrix of all products w * f_i at a fixed degree l: one row
/// per degree-l monomial, one column per (i, w).
struct MacaulayMatrix {
  std::vector<Monomial> rows;
  std::vector<MacaulayColumn> cols;
  QMatrix entries;
  std::vector<unsigned> degrees;
  unsigned degree = 0;
};

/// Shifts of homogeneous `polys` to total degree `degree` (grevlex order on
/// rows and multipliers). Polys with l_i > degree contribute no columns.
MacaulayMatrix macaulay_at_degree(std::span<const QPoly> polys, unsigned degree);

/// Matrix at the critical degree l = l_1 + ... + l_a - a + 1. `polys` are a
/// homogeneous forms in a variables; `degrees`, if non-empty, must match.
MacaulayMatrix build_macaulay(std::span<const QPoly> polys, std::span<const unsigned> degrees = {});

/// True iff p_1(Ax), ..., p_n(Ax) have no common nonzero root, decided by
/// full row rank of the Macaulay matrix at degree n(n-1)/2 + 1.
bool regular_sequence_test(const QMatrix& a);

/// Macaulay resultant det(M) / det(M') of a homogeneous forms in a
/// variables, normalized so that Res(t_1^l_1, ..., t_a^l_a) = 1. Throws
/// DegenerateInput("denominator degenerate") when det(M') = 0.
Rational resultant_eval(std::span<const QPoly> polys);

/// For a <= 2 the Macaulay matrix is square and its determinant is the
/// gcd of its maximal minors; equals resultant_eval up to sign.
Rational resultant_by_minors(std::span<const QPoly> polys);

/// The forms f_i* = p_i(A t) - r_i t_{n+1}^i, i = 1..n+1, in n+1 variables.
std::vector<QPoly> augmented_forms(const QMatrix& a, std::span<const Rational> r);

struct EliminantOptions {
  bool allow_large = false;  // permit n > 2
  int retry_budget = 16;     // extra nodes tried when det(M') vanishes
};

struct EliminantResult {
  /// r_{n+1} -> rho(A, r_fixed, r_{n+1}), ascending coefficients.
  UPoly poly;
  std::vector<Rational> evaluation_points;
  std::vector<Rational> attempted_points;
  std::vector<bool> denominator_ok;  // parallel to attempted_points
  std::size_t expected_degree = 0;   // n!
};

/// Eliminant in r_{n+1} with r_1..r_n fixed, by evaluating resultant_eval at
/// n!+2 nodes 0, 1, -1, 2, -2, ... (skipping degenerate ones) and
/// interpolating.
EliminantResult eliminant(const QMatrix& a, std::span<const Rational> r_fixed, const EliminantOptions& opts = {});

nlohmann::ordered_json to_json(const EliminantResult& res);

}  // namespace unshuffle
