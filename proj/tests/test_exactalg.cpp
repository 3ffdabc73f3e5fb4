#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "unshuffle/errors.hpp"
#include "unshuffle/exactalg.hpp"
#include "unshuffle/symfun.hpp"

using namespace unshuffle;

namespace {

QPoly parse2(const char* s) { return QPoly::parse(s, 2); }

Instance exact_instance(const QMatrix& a, std::vector<Rational> xi, const Permutation& pi) {
  Instance inst;
  inst.m = a.rows();
  inst.n = a.cols();
  inst.domain = Domain::exact;
  inst.a = a;
  inst.y = pi.apply(a.apply(xi));
  inst.xi_star = std::move(xi);
  inst.pi = pi;
  return inst;
}

Instance strip_truth(Instance inst) {
  inst.xi_star.reset();
  inst.pi.reset();
  return inst;
}

bool reduces_to_zero(const QPoly& f, const std::vector<QPoly>& basis) { return normal_form(f, basis).is_zero(); }

}  // namespace

TEST_CASE("Groebner basis of a point") {
  const auto gb = groebner({{parse2("1/1*x1^1*x2^0 + -1/1*x1^0*x2^0"), parse2("1/1*x1^0*x2^1 + -2/1*x1^0*x2^0")}});
  REQUIRE(gb.basis.size() == 2);
  CHECK(gb.quotient_dim == 1u);
  CHECK(gb.standard_monomials == std::vector<Monomial>{Monomial{0, 0}});
  // A non-reduced presentation of the same ideal gives the same reduced basis.
  const auto gb2 = groebner({{parse2("1/1*x1^1*x2^0 + 1/1*x1^0*x2^1 + -3/1*x1^0*x2^0"),
                              parse2("2/1*x1^0*x2^1 + -4/1*x1^0*x2^0")}});
  CHECK(gb2.basis == gb.basis);
}

TEST_CASE("Groebner basis of the square of the maximal ideal") {
  const auto gb = groebner({{parse2("1/1*x1^2*x2^0"), parse2("1/1*x1^1*x2^1"), parse2("1/1*x1^0*x2^2")}});
  CHECK(gb.basis.size() == 3);
  CHECK(gb.quotient_dim == 3u);
  CHECK(gb.standard_monomials.size() == 3);
}

TEST_CASE("unit and positive-dimensional ideals") {
  const auto unit = groebner({{parse2("1/1*x1^1*x2^0"), parse2("1/1*x1^1*x2^0 + 1/1*x1^0*x2^0")}});
  CHECK(unit.is_unit_ideal());
  const auto line = groebner({{parse2("1/1*x1^1*x2^1 + -1/1*x1^0*x2^0"), parse2("1/1*x1^2*x2^1 + -1/1*x1^1*x2^0")}});
  CHECK_FALSE(line.zero_dimensional());
}

TEST_CASE("quotient dimension of Q2 against the reduced quadratic") {
  std::mt19937_64 gen(51);
  for (int trial = 0; trial < 5; ++trial) {
    const QMatrix a = QMatrix::from_rows(oracle::random_matrix(gen, 3 + trial % 3, 2, 9));
    const Instance inst = exact_instance(a, {oracle::random_rational(gen, 9, 3), oracle::random_rational(gen, 9, 3)},
                                         Permutation::identity(a.rows()));
    const auto gb = groebner({power_sum_system(inst, 2)});
    REQUIRE(gb.quotient_dim == 2u);

    // On the line p1 = r1, x2 = (r1 - c1 x1)/c2, and p2 = r2 is a quadratic
    // in x1 whose roots are the x1-coordinates of the two solutions.
    Rational c1 = 0, c2 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      c1 += a(i, 0);
      c2 += a(i, 1);
      r1 += inst.y[i];
      r2 += inst.y[i] * inst.y[i];
    }
    REQUIRE(sgn(c2) != 0);
    Rational uu = 0, uv = 0, vv = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const Rational u = a(i, 0) - a(i, 1) * c1 / c2;
      const Rational v = a(i, 1) * r1 / c2;
      uu += u * u;
      uv += u * v;
      vv += v * v;
    }
    const UPoly expected = UPoly({(vv - r2) / uu, 2 * uv / uu, Rational(1)});
    CHECK(characteristic_polynomial(multiplication_matrix(gb, 0)) == expected);
  }
}

TEST_CASE("square systems have n! solutions") {
  std::mt19937_64 gen(52);
  const std::size_t fact[] = {1, 1, 2, 6};
  for (std::size_t n = 1; n <= 3; ++n) {
    const QMatrix a = QMatrix::from_rows(oracle::random_matrix(gen, n + 2, n, 9));
    std::vector<Rational> xi(n);
    for (auto& v : xi) v = oracle::random_rational(gen, 9, 3);
    const Instance inst = exact_instance(a, xi, Permutation::identity(a.rows()));
    CHECK(verify_square_count(inst) == fact[n]);
  }
}

TEST_CASE("unique root of the overdetermined system") {
  SUBCASE("n = 1") {
    const QMatrix a = QMatrix::from_rows({{Rational(2)}, {Rational(-3)}, {Rational(5)}});
    const Instance inst = exact_instance(a, {Rational(7, 2)}, Permutation{{2, 0, 1}});
    const auto res = verify_unique_root(inst);
    CHECK(res.status == UniqueRootResult::Status::unique_root);
    CHECK(res.root == std::vector<Rational>{Rational(7, 2)});
  }
  SUBCASE("symmetric toy design has two roots") {
    // Swapping x1 and x2 permutes the rows of this A, so (2, 1) solves too.
    const QMatrix a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
    const Instance inst = exact_instance(a, {Rational(1), Rational(2)}, Permutation{{2, 1, 0}});
    CHECK_THROWS_AS(verify_unique_root(inst), TheoremViolation);
  }
  SUBCASE("n = 2, small design") {
    const QMatrix a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(2)}});
    const Instance inst = exact_instance(a, {Rational(1), Rational(2)}, Permutation{{2, 1, 0}});
    const auto res = verify_unique_root(inst);
    CHECK(res.status == UniqueRootResult::Status::unique_root);
    CHECK(res.root == std::vector<Rational>{Rational(1), Rational(2)});
    for (std::size_t i = 0; i < 2; ++i) {
      QPoly lin = QPoly::variable(2, i) - QPoly::constant(2, res.root[i]);
      CHECK(reduces_to_zero(lin, res.basis));
    }
  }
  SUBCASE("perturbed responses") {
    const QMatrix a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
    Instance inst = strip_truth(exact_instance(a, {Rational(1), Rational(2)}, Permutation::identity(3)));
    inst.y[0] += 1;
    const auto res = verify_unique_root(inst);
    CHECK(res.status == UniqueRootResult::Status::no_solution);
  }
  SUBCASE("random n = 3") {
    const Instance inst = generate(6, 3, 17, Domain::exact);
    const auto res = verify_unique_root(inst);
    CHECK(res.status == UniqueRootResult::Status::unique_root);
    CHECK(res.root == *inst.xi_star);
  }
}

TEST_CASE("exact verification preconditions") {
  CHECK_THROWS_AS(verify_unique_root(generate(6, 2, 1, Domain::floating)), UsageError);
  CHECK_THROWS_AS(verify_square_count(generate(6, 4, 1, Domain::exact)), CapExceeded);
  Instance bad = generate(6, 2, 1, Domain::exact);
  bad.y[0] += 1;
  CHECK_THROWS_AS(verify_unique_root(bad), UsageError);
}

TEST_CASE("Groebner basis properties on power-sum systems") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const std::size_t n = 2 + seed % 2;
    const Instance inst = generate(n + 2, n, 60 + seed, Domain::exact);
    auto gens = power_sum_system(inst, n);
    const auto gb = groebner({gens});
    for (const auto& g : gens) CHECK(reduces_to_zero(g, gb.basis));
    for (std::size_t i = 0; i < gb.basis.size(); ++i) {
      CHECK(gb.basis[i].leading_coeff() == 1);
      for (std::size_t j = i + 1; j < gb.basis.size(); ++j) {
        CHECK(reduces_to_zero(s_polynomial(gb.basis[i], gb.basis[j]), gb.basis));
        // Reduced: no leading monomial divides another.
        CHECK_FALSE(gb.basis[i].leading_monomial().divides(gb.basis[j].leading_monomial()));
      }
    }
    std::reverse(gens.begin(), gens.end());
    std::rotate(gens.begin(), gens.begin() + 1, gens.end());
    CHECK(groebner({gens}).basis == gb.basis);
  }
}

TEST_CASE("resource caps") {
  const Instance inst = generate(5, 3, 4, Domain::exact);
  GroebnerLimits tiny;
  tiny.max_degree = 3;
  CHECK_THROWS_AS(verify_square_count(inst, false, tiny), CapExceeded);
  GroebnerLimits few;
  few.max_basis = 3;
  CHECK_THROWS_AS(verify_square_count(inst, false, few), CapExceeded);
  GroebnerLimits narrow;
  narrow.max_coeff_bits = 8;
  CHECK_THROWS_AS(verify_square_count(inst, false, narrow), CapExceeded);
}

TEST_CASE("characteristic polynomial") {
  const QMatrix m = QMatrix::from_rows({{Rational(2), Rational(1)}, {Rational(0), Rational(3)}});
  CHECK(characteristic_polynomial(m) == UPoly({Rational(6), Rational(-5), Rational(1)}));
}

TEST_CASE("determinantal linear basis") {
  SUBCASE("toy design") {
    const QMatrix a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
    const auto forms = determinantal_linear_basis(a);
    REQUIRE(forms.size() == 1);
    const QPoly expected = QPoly::parse("1/1*x1^1*x2^0*x3^0 + 1/1*x1^0*x2^1*x3^0 + -1/1*x1^0*x2^0*x3^1", 3,
                                        MonomialOrder::lex);
    CHECK(forms[0] == expected);
  }
  SUBCASE("forms span the left null space") {
    std::mt19937_64 gen(53);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 1 + trial % 3, m = n + 1 + trial % 4;
      const auto rows = oracle::random_matrix(gen, m, n, 20);
      const auto forms = determinantal_linear_basis(QMatrix::from_rows(rows));
      REQUIRE(forms.size() == m - n);
      oracle::Matrix coeffs;
      for (std::size_t i = 0; i < forms.size(); ++i) {
        CHECK(forms[i].leading_monomial() == Monomial::variable(m, i));
        std::vector<Rational> c(m);
        for (std::size_t k = 0; k < m; ++k) c[k] = forms[i].coefficient(Monomial::variable(m, k));
        for (std::size_t k = 0; k < m - n; ++k) {
          if (k != i) CHECK(c[k] == 0);
        }
        for (std::size_t j = 0; j < n; ++j) {
          Rational dot = 0;
          for (std::size_t k = 0; k < m; ++k) dot += c[k] * rows[k][j];
          CHECK(dot == 0);
        }
        coeffs.push_back(c);
      }
      CHECK(oracle::gauss_rank(coeffs) == m - n);
    }
  }
  SUBCASE("singular pivot block") {
    const QMatrix a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(1), Rational(1)}, {Rational(2), Rational(2)}});
    CHECK_THROWS_AS(determinantal_linear_basis(a), DegenerateInput);
  }
}
