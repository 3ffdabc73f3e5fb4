#include <set>

#include "doctest.h"
#include "unshuffle/errors.hpp"
#include "unshuffle/instance.hpp"
#include "unshuffle/rng.hpp"

using namespace unshuffle;

namespace {

Instance toy_instance() {
  // A = [[1,0],[0,1],[1,1]], xi = (1,2), pi reverses: y = (3,2,1).
  Instance inst;
  inst.m = 3;
  inst.n = 2;
  inst.domain = Domain::exact;
  inst.a = QMatrix::from_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}, {Rational(1), Rational(1)}});
  inst.xi_star = std::vector<Rational>{Rational(1), Rational(2)};
  inst.pi = Permutation{{2, 1, 0}};
  inst.y = {Rational(3), Rational(2), Rational(1)};
  return inst;
}

}  // namespace

TEST_CASE("SplitMix64 reproduces the reference stream") {
  SplitMix64 g(0);
  CHECK(g.next_u64() == 0xe220a8397b1dcdafULL);
  CHECK(g.next_u64() == 0x6e789e6aa1b965f4ULL);
  CHECK(g.next_u64() == 0x06c45d188009454fULL);
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("uniform integers stay in range and cover it") {
  SplitMix64 g(42);
  std::set<std::int64_t> seen;
  for (int k = 0; k < 2000; ++k) {
    const auto v = g.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  for (int k = 0; k < 1000; ++k) {
    const double u = g.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("labelled streams are independent of draw order") {
  SplitMix64 a = derive_stream(7, "A");
  SplitMix64 a2 = derive_stream(7, "A");
  a2.next_u64();
  CHECK(a.split("x").next_u64() == a2.split("x").next_u64());
  CHECK(derive_stream(7, "A").next_u64() != derive_stream(7, "xi").next_u64());
  CHECK(derive_stream(7, "A").next_u64() != derive_stream(8, "A").next_u64());
}

TEST_CASE("normal draws have roughly unit variance") {
  SplitMix64 g(3);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double v = g.normal();
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("permutation conventions") {
  const Permutation p{{2, 0, 1}};
  const std::vector<int> v{10, 20, 30};
  const auto moved = p.apply(v);
  CHECK(moved == std::vector<int>{20, 30, 10});
  CHECK(p.unapply(moved) == v);
  CHECK(p.inverse().apply(moved) == v);
  CHECK(p.is_bijection());
  CHECK_FALSE(Permutation{{0, 0, 1}}.is_bijection());
  CHECK(Permutation::identity(3).apply(v) == v);
}

TEST_CASE("hand-built instance validates") {
  CHECK(validate(toy_instance()).empty());
  auto bad = toy_instance();
  bad.pi = Permutation{{0, 0, 1}};
  const auto v = validate(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "pi not a bijection");
  auto shape = toy_instance();
  shape.n = 4;
  CHECK(validate(shape).front() == "m ≥ n required");
  auto wrong_y = toy_instance();
  wrong_y.y[0] = 4;
  CHECK(validate(wrong_y) == std::vector<std::string>{"y is not pi(A xi_star)"});
}

TEST_CASE("generated instances are consistent and deterministic") {
  for (auto domain : {Domain::exact, Domain::floating}) {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
      const Instance a = generate(6, 3, seed, domain);
      CHECK(validate(a).empty());
      CHECK(serialize(a) == serialize(generate(6, 3, seed, domain)));
      REQUIRE(a.pi.has_value());
      // y = pi(A xi) rebuilt by hand; float instances use double arithmetic.
      const auto clean = a.a.apply(*a.xi_star);
      for (std::size_t i = 0; i < a.m; ++i) {
        if (domain == Domain::exact) {
          CHECK(a.y[a.pi->image[i]] == clean[i]);
        } else {
          const double want = to_double(clean[i]);
          CHECK(to_double(a.y[a.pi->image[i]]) == doctest::Approx(want).epsilon(1e-14));
        }
      }
    }
  }
  CHECK(serialize(generate(6, 3, 1, Domain::exact)) != serialize(generate(6, 3, 2, Domain::exact)));
}

TEST_CASE("exact draws respect the numerator and denominator bounds") {
  const Instance inst = generate(30, 3, 5, Domain::exact);
  for (std::size_t i = 0; i < inst.m; ++i) {
    for (std::size_t j = 0; j < inst.n; ++j) {
      const Rational& q = inst.a(i, j);
      CHECK(abs(q.get_num()) <= 10000);
      CHECK(q.get_den() <= 100);
    }
  }
}

TEST_CASE("generation preconditions") {
  CHECK_THROWS_AS(generate(2, 4, 0, Domain::exact), UsageError);
  CHECK_THROWS_AS(generate(4, 0, 0, Domain::exact), UsageError);
  CHECK_THROWS_AS(generate(4, 2, 0, Domain::exact, 0.1), UsageError);
  CHECK_THROWS_AS(generate(4, 2, 0, Domain::floating, -1.0), UsageError);
}

TEST_CASE("noise is added after the permutation and only in the float domain") {
  const Instance clean = generate(50, 2, 4, Domain::floating);
  const Instance noisy = with_noise(clean, 0.5);
  CHECK(noisy.sigma == 0.5);
  CHECK(noisy.pi == clean.pi);
  double dev = 0.0;
  for (std::size_t i = 0; i < clean.m; ++i) dev += std::abs(to_double(noisy.y[i] - clean.y[i]));
  CHECK(dev > 0.0);
  CHECK(dev / 50 < 2.0);
  CHECK(validate(noisy).empty());
  CHECK(serialize(noisy) == serialize(generate(50, 2, 4, Domain::floating, 0.5)));
}

TEST_CASE("SNR to sigma") {
  // ||A xi||^2 / m = 1 with A = I_2, xi = (1, 1).
  Instance inst;
  inst.m = 2;
  inst.n = 2;
  inst.domain = Domain::floating;
  inst.a = QMatrix::identity(2);
  inst.xi_star = std::vector<Rational>{Rational(1), Rational(1)};
  inst.pi = Permutation::identity(2);
  inst.y = {Rational(1), Rational(1)};
  CHECK(snr_to_sigma(inst, 40.0) == doctest::Approx(0.01).epsilon(1e-12));
  inst.xi_star = std::vector<Rational>{Rational(2), Rational(-2)};
  inst.y = {Rational(2), Rational(-2)};
  CHECK(snr_to_sigma(inst, 20.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(snr_to_sigma(inst, 400.0) < 1e-19);
  inst.xi_star = std::vector<Rational>{Rational(0), Rational(0)};
  CHECK_THROWS_AS(snr_to_sigma(inst, 40.0), DegenerateInput);
}

TEST_CASE("serialization round trip is byte-identical") {
  for (auto domain : {Domain::exact, Domain::floating}) {
    const std::string text = serialize(generate(7, 3, 12, domain, domain == Domain::floating ? 0.25 : 0.0));
    CHECK(serialize(parse_instance(text)) == text);
  }
  const std::string toy = serialize(toy_instance());
  CHECK(toy.find("\"A\"") != std::string::npos);
  CHECK(toy.find("\"3/1\"") != std::string::npos);
  CHECK(serialize(parse_instance(toy)) == toy);
}

TEST_CASE("malformed instance files are usage errors") {
  CHECK_THROWS_AS(parse_instance("{"), UsageError);
  CHECK_THROWS_AS(parse_instance(R"({"m":1,"n":1,"seed":0,"domain":"exact","sigma":"0","A":[1],"y":["1"]})"),
                  UsageError);
  CHECK_THROWS_AS(parse_instance(R"({"m":2,"n":1,"seed":0,"domain":"exact","sigma":"0","A":["1"],"y":["1","2"]})"),
                  UsageError);
  CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), UsageError);
}
