#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "unshuffle/errors.hpp"
#include "unshuffle/residual.hpp"
#include "unshuffle/symfun.hpp"

using namespace unshuffle;

namespace {

Eigen::MatrixXd toy_a() {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  return a;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

}  // namespace

TEST_CASE("targets are the power sums of y") {
  const auto sys = ResidualSystem::compile(toy_a(), vec({3, 2, 1}));
  CHECK(sys.target() == vec({6, 14, 36}));
  Eigen::MatrixXd one(1, 1);
  one << 2;
  CHECK(ResidualSystem::compile(one, vec({6})).target() == vec({6, 36}));
}

TEST_CASE("unit-scale residual at the origin is minus the targets") {
  const auto sys = ResidualSystem::compile(toy_a(), vec({3, 2, 1})).with_scale(vec({1, 1, 1}));
  CHECK(sys.residual(vec({0, 0})) == vec({-6, -14, -36}));
  CHECK(sys.residual(vec({1, 2})).norm() == 0.0);
  const auto jac0 = sys.jacobian(vec({0, 0}));
  CHECK(jac0.row(0) == vec({2, 2}).transpose());
  CHECK(jac0.row(1).norm() == 0.0);
  CHECK(jac0.row(2).norm() == 0.0);
}

TEST_CASE("first Jacobian row is the scaled column sums everywhere") {
  const Instance inst = generate(9, 3, 2, Domain::floating);
  const auto sys = ResidualSystem::compile(inst);
  const Eigen::RowVectorXd colsum = inst.a_float().colwise().sum();
  for (int k = 0; k < 5; ++k) {
    const Eigen::VectorXd x = Eigen::VectorXd::Random(3) * 4;
    CHECK((sys.jacobian(x).row(0) - sys.scale()(0) * colsum).norm() <= 1e-12 * colsum.norm() * sys.scale()(0));
  }
}

TEST_CASE("noiseless instances have zero residual at the ground truth") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = generate(40, 4, seed, Domain::floating);
    const auto sys = ResidualSystem::compile(inst).with_scale(Eigen::VectorXd::Ones(5));
    const Eigen::VectorXd r = sys.residual(*inst.xi_float());
    for (Eigen::Index l = 0; l < r.size(); ++l) CHECK(std::abs(r(l)) <= 1e-10 * std::max(1.0, std::abs(sys.target()(l))));
  }
}

TEST_CASE("residual matches the symbolically expanded system") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3, m = n + trial % 4;
    const QMatrix a = QMatrix::from_rows(oracle::random_matrix(gen, m, n, 9));
    std::vector<Rational> y(m), x(n);
    for (auto& v : y) v = oracle::random_rational(gen, 9, 3);
    for (auto& v : x) v = oracle::random_rational(gen, 9, 3);
    Eigen::MatrixXd af(m, n);
    Eigen::VectorXd yf(m), xf(n);
    for (std::size_t i = 0; i < m; ++i) {
      yf(i) = to_double(y[i]);
      for (std::size_t j = 0; j < n; ++j) af(i, j) = to_double(a(i, j));
    }
    for (std::size_t j = 0; j < n; ++j) xf(j) = to_double(x[j]);
    const auto sys = ResidualSystem::compile(af, yf);
    const Eigen::VectorXd r = sys.residual(xf);
    for (std::size_t l = 1; l <= n + 1; ++l) {
      // The rational entries above are not all exact doubles; build the
      // oracle from the rounded values the float system actually sees.
      QMatrix ar(m, n);
      std::vector<Rational> yr(m), xr(n);
      for (std::size_t i = 0; i < m; ++i) {
        yr[i] = to_rational(yf(i));
        for (std::size_t j = 0; j < n; ++j) ar(i, j) = to_rational(af(i, j));
      }
      for (std::size_t j = 0; j < n; ++j) xr[j] = to_rational(xf(j));
      const QPoly q = expand_power_sum_pullback(ar, static_cast<int>(l));
      const Rational exact = q.eval(xr) - power_sum<Rational>(static_cast<int>(l), yr);
      const double want = sys.scale()(l - 1) * to_double(exact);
      Rational mag = 0;
      for (const auto& t : q.terms()) mag += abs(t.coeff);
      const double tol = 1e-9 * sys.scale()(l - 1) * std::max(1.0, to_double(power_sum<Rational>(static_cast<int>(l), yr)) + to_double(mag) * std::pow(std::max(1.0, xf.cwiseAbs().maxCoeff()), l));
      CHECK(std::abs(r(l - 1) - want) <= tol);
    }
  }
}

TEST_CASE("Jacobian matches central differences") {
  std::mt19937_64 gen(42);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const Instance inst = generate(3 * n + 2, n, 100 + trial, Domain::floating);
    const auto sys = ResidualSystem::compile(inst);
    Eigen::VectorXd x(n);
    for (auto& v : x) v = nd(gen);
    const Eigen::MatrixXd jac = sys.jacobian(x);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(n); ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      const Eigen::VectorXd fd = (sys.residual(xp) - sys.residual(xm)) / (2 * h);
      CHECK((fd - jac.col(j)).norm() <= 1e-6 * std::max(jac.norm(), 1e-12));
    }
  }
}

TEST_CASE("targets do not depend on the order of y") {
  const Instance inst = generate(200, 3, 8, Domain::floating);
  Eigen::VectorXd y = inst.y_float();
  const auto sys = ResidualSystem::compile(inst.a_float(), y);
  std::mt19937_64 gen(43);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(y.data(), y.data() + y.size(), gen);
    const auto other = ResidualSystem::compile(inst.a_float(), y);
    CHECK(other.target() == sys.target());
    CHECK(other.scale() == sys.scale());
  }
}

TEST_CASE("scaling policies") {
  const Eigen::VectorXd y = vec({3, -2, 1});
  const auto moment = ResidualSystem::compile(toy_a(), y, 0.0, Scaling::moment);
  CHECK(moment.scale()(0) == doctest::Approx(1.0 / std::sqrt(14.0)));
  CHECK(moment.scale()(1) == doctest::Approx(1.0 / std::sqrt(81.0 + 16.0 + 1.0)));
  const auto median = ResidualSystem::compile(toy_a(), y, 0.0, Scaling::median);
  CHECK(median.scale_reference() == 2.0);
  CHECK(median.scale()(0) == doctest::Approx(1.0 / 6.0));
  CHECK(median.scale()(2) == doctest::Approx(1.0 / 24.0));
  // All-zero responses fall back to unit weights.
  const auto zero = ResidualSystem::compile(toy_a(), vec({0, 0, 0}));
  CHECK(zero.scale() == vec({1, 1, 1}));
  CHECK(parse_scaling("median") == Scaling::median);
  CHECK_THROWS_AS(parse_scaling("other"), UsageError);
  CHECK_THROWS_AS(moment.with_scale(vec({1, 0, 1})), UsageError);
}

TEST_CASE("compile preconditions and overflow flag") {
  Eigen::MatrixXd wide(1, 2);
  wide << 1, 2;
  CHECK_THROWS_AS(ResidualSystem::compile(wide, vec({1})), UsageError);
  Eigen::MatrixXd a = toy_a();
  a(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ResidualSystem::compile(a, vec({1, 2, 3})), std::domain_error);
  const auto sys = ResidualSystem::compile(toy_a(), vec({3, 2, 1}));
  CHECK_FALSE(sys.evaluate(vec({1e300, 1e300}), true).finite);
  CHECK(sys.evaluate(vec({1, 1}), true).finite);
  CHECK_THROWS_AS(sys.residual(vec({1, 2, 3})), UsageError);
}
