#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unshuffle/instance.hpp"
#include "unshuffle/polyring.hpp"
#include "unshuffle/qmatrix.hpp"
#include "unshuffle/upoly.hpp"

namespace unshuffle {

struct IdealBasis {
  std::vector<QPoly> generators;
  MonomialOrder order = MonomialOrder::grevlex;
};

/// Exceeding any limit aborts with CapExceeded.
struct GroebnerLimits {
  std::uint64_t max_degree = 40;
  std::size_t max_basis = 500;
  std::size_t max_coeff_bits = 20000;
};

struct GroebnerResult {
  /// Reduced, monic, sorted by ascending leading monomial.
  std::vector<QPoly> basis;
  /// Monomials outside the leading-term ideal, ascending; empty when the
  /// quotient is infinite-dimensional (or zero, i.e. basis = {1}).
  std::vector<Monomial> standard_monomials;
  /// nullopt when the quotient is infinite-dimensional.
  std::optional<std::size_t> quotient_dim;
  MonomialOrder order = MonomialOrder::grevlex;

  bool zero_dimensional() const { return quotient_dim.has_value(); }
  bool is_unit_ideal() const { return quotient_dim && *quotient_dim == 0; }
};

/// Buchberger's algorithm with the normal selection strategy and the
/// Gebauer-Moeller installation of both Buchberger criteria.
GroebnerResult groebner(const IdealBasis& ideal, const GroebnerLimits& limits = {});

/// Fully reduced remainder of f modulo `basis` (monic generators expected
/// but not required).
QPoly normal_form(const QPoly& f, const std::vector<QPoly>& basis);

/// S-polynomial of two nonzero polynomials.
QPoly s_polynomial(const QPoly& f, const QPoly& g);

/// q_l(x) = p_l(A x) - p_l(y) for l = 1..count, exact.
std::vector<QPoly> power_sum_system(const Instance& inst, std::size_t count,
                                    MonomialOrder order = MonomialOrder::grevlex);

/// Multiplication-by-x_var matrix on the standard monomials of a
/// zero-dimensional Groebner basis; column k is NF(x_var * b_k).
QMatrix multiplication_matrix(const GroebnerResult& gb, std::size_t var);

/// det(t I - M) by the Faddeev-LeVerrier recursion.
UPoly characteristic_polynomial(const QMatrix& m);

/// Dimension of k[x]/Q_n for an exact noiseless instance; n <= 3 unless
/// `allow_large`. nullopt when the square system is not zero-dimensional.
std::optional<std::size_t> verify_square_count(const Instance& inst, bool allow_large = false,
                                               const GroebnerLimits& limits = {});

struct UniqueRootResult {
  enum class Status { unique_root, no_solution };
  Status status = Status::no_solution;
  std::vector<Rational> root;
  std::size_t quotient_dim = 0;
  /// Set when the ideal is not radical at the root (quotient dim > 1).
  std::optional<std::string> multiplicity_note;
  std::vector<QPoly> basis;
};

/// Groebner basis of Q_{n+1}: succeeds when its variety is exactly one
/// point (which must equal xi_star when the instance carries it), reports
/// no_solution when the ideal is the unit ideal, and throws
/// TheoremViolation otherwise.
UniqueRootResult verify_unique_root(const Instance& inst, bool allow_large = false,
                                    const GroebnerLimits& limits = {});

/// The m-n linear forms in y_1..y_m (lex, y_1 > ... > y_m) whose common zero
/// set is the column space of A; form i has leading variable y_i and support
/// in {y_i} and the last n variables. Throws DegenerateInput("pivot block
/// singular") when the bottom n x n block of A is singular.
std::vector<QPoly> determinantal_linear_basis(const QMatrix& a);

}  // namespace unshuffle
