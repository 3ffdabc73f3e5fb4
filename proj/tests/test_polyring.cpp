#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "unshuffle/polyring.hpp"

using namespace unshuffle;

namespace {

QPoly random_poly(std::mt19937_64& gen, std::size_t arity, unsigned max_deg, int terms,
                  MonomialOrder order = MonomialOrder::grevlex) {
  std::uniform_int_distribution<Exponent> e(0, max_deg);
  std::vector<Term<Rational>> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<Exponent> exps(arity);
    for (auto& x : exps) x = e(gen);
    t.push_back({Monomial(exps), oracle::random_rational(gen, 20, 5)});
  }
  return QPoly::from_terms(arity, std::move(t), order);
}

std::vector<Rational> random_point(std::mt19937_64& gen, std::size_t arity) {
  std::vector<Rational> p(arity);
  for (auto& v : p) v = oracle::random_rational(gen, 9, 4);
  return p;
}

}  // namespace

TEST_CASE("monomial orders on three variables") {
  const Monomial x1x3sq{1, 0, 2};
  const Monomial x2cube{0, 3, 0};
  CHECK(compare(x1x3sq, x2cube, MonomialOrder::lex) > 0);
  CHECK(compare(x1x3sq, x2cube, MonomialOrder::grevlex) < 0);
  CHECK(compare(Monomial{2, 0, 0}, Monomial{0, 0, 1}, MonomialOrder::grevlex) > 0);
  CHECK(compare(Monomial{1, 1, 0}, Monomial{1, 1, 0}, MonomialOrder::grevlex) == 0);
  // Degree 2 in two variables: x1^2 > x1*x2 > x2^2 in both orders.
  const auto monos = monomials_of_degree(2, 2);
  REQUIRE(monos.size() == 3);
  CHECK(monos[0] == Monomial{2, 0});
  CHECK(monos[1] == Monomial{1, 1});
  CHECK(monos[2] == Monomial{0, 2});
  CHECK(monomials_of_degree(4, 3).size() == 20);
}

TEST_CASE("monomial divisibility, lcm and quotient") {
  const Monomial a{2, 1, 0}, b{1, 3, 0};
  CHECK(lcm(a, b) == Monomial{2, 3, 0});
  CHECK(Monomial{1, 1, 0}.divides(a));
  CHECK_FALSE(a.divides(b));
  CHECK(a / Monomial{1, 0, 0} == Monomial{1, 1, 0});
  CHECK(Monomial{1, 0, 0}.coprime(Monomial{0, 2, 1}));
  CHECK(format_monomial(Monomial{0, 2, 1}) == "x1^0*x2^2*x3^1");
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto order = trial % 2 ? MonomialOrder::lex : MonomialOrder::grevlex;
    QPoly f = random_poly(gen, 3, 3, 5, order), g = random_poly(gen, 3, 3, 4, order), h = random_poly(gen, 3, 2, 3, order);
    CHECK(f + g == g + f);
    CHECK(f * g == g * f);
    CHECK((f + g) + h == f + (g + h));
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
    CHECK((f - f).is_zero());
    CHECK(f * QPoly::constant(3, Rational(1), order) == f);
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 25; ++trial) {
    QPoly f = random_poly(gen, 3, 3, 5), g = random_poly(gen, 3, 3, 5);
    const auto pt = random_point(gen, 3);
    CHECK((f * g).eval(pt) == f.eval(pt) * g.eval(pt));
    CHECK((f + g).eval(pt) == f.eval(pt) + g.eval(pt));
  }
}

TEST_CASE("partial derivatives obey the Leibniz rule") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 25; ++trial) {
    QPoly f = random_poly(gen, 3, 4, 5), g = random_poly(gen, 3, 4, 5);
    for (std::size_t v = 0; v < 3; ++v) CHECK((f * g).diff(v) == f.diff(v) * g + f * g.diff(v));
  }
  // d/dx1 of x1^3 x2 is 3 x1^2 x2
  QPoly m = QPoly::monomial(Monomial{3, 1}, Rational(1));
  CHECK(m.diff(0) == QPoly::monomial(Monomial{2, 1}, Rational(3)));
  CHECK(m.diff(1) == QPoly::monomial(Monomial{3, 0}, Rational(1)));
}

TEST_CASE("leading terms follow the ring order") {
  QPoly f = QPoly::parse("1/1*x1^1*x2^0*x3^2 + 1/1*x1^0*x2^3*x3^0", 3, MonomialOrder::lex);
  CHECK(f.leading_monomial() == Monomial{1, 0, 2});
  CHECK(f.with_order(MonomialOrder::grevlex).leading_monomial() == Monomial{0, 3, 0});
  CHECK(f.is_homogeneous());
  CHECK(f.total_degree() == 3);
  CHECK_FALSE((f + QPoly::constant(3, Rational(1), MonomialOrder::lex)).is_homogeneous());
}

TEST_CASE("text serialization round trips") {
  QPoly zero(2);
  CHECK(zero.to_string() == "0");
  CHECK(QPoly::parse("0", 2).is_zero());
  QPoly f = QPoly::from_terms(2, {{Monomial{2, 0}, Rational(2)}, {Monomial{0, 0}, Rational(-1, 3)}});
  CHECK(f.to_string() == "2/1*x1^2*x2^0 + -1/3*x1^0*x2^0");
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 20; ++trial) {
    QPoly g = random_poly(gen, 4, 3, 6);
    CHECK(QPoly::parse(g.to_string(), 4) == g);
  }
  FPoly d = FPoly::from_terms(1, {{Monomial{1}, 0.1}, {Monomial{0}, -2.5}});
  CHECK(d.to_string() == "0.1*x1^1 + -2.5*x1^0");
  CHECK(FPoly::parse(d.to_string(), 1) == d);
}

TEST_CASE("arity mismatches are rejected") {
  QPoly a = QPoly::variable(2, 0), b = QPoly::variable(3, 0);
  CHECK_THROWS_AS(a + b, UsageError);
  CHECK_THROWS_AS(QPoly::variable(2, 5), UsageError);
}
