#include "unshuffle/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "unshuffle/errors.hpp"
#include "unshuffle/rng.hpp"

namespace unshuffle {

std::string_view to_string(Domain d) { return d == Domain::exact ? "exact" : "float"; }

Domain parse_domain(std::string_view s) {
  if (s == "exact") return Domain::exact;
  if (s == "float") return Domain::floating;
  throw UsageError("domain must be \"exact\" or \"float\"");
}

Permutation Permutation::identity(std::size_t m) {
  Permutation p;
  p.image.resize(m);
  for (std::size_t i = 0; i < m; ++i) p.image[i] = i;
  return p;
}

bool Permutation::is_bijection() const {
  std::vector<bool> seen(image.size(), false);
  for (std::size_t v : image) {
    if (v >= image.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.image.resize(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) inv.image[image[i]] = i;
  return inv;
}

Eigen::MatrixXd Instance::a_float() const {
  Eigen::MatrixXd out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = to_double(a(i, j));
  }
  return out;
}

Eigen::VectorXd Instance::y_float() const {
  Eigen::VectorXd out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out(i) = to_double(y[i]);
  return out;
}

std::optional<Eigen::VectorXd> Instance::xi_float() const {
  if (!xi_star) return std::nullopt;
  Eigen::VectorXd out(xi_star->size());
  for (std::size_t i = 0; i < xi_star->size(); ++i) out(i) = to_double((*xi_star)[i]);
  return out;
}

namespace {

Rational draw(SplitMix64& rng, Domain domain) {
  if (domain == Domain::exact) {
    long num = rng.uniform_int(-10000, 10000);
    long den = rng.uniform_int(1, 100);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return to_rational(rng.normal());
}

std::vector<Rational> clean_signal(const Instance& inst) {
  if (inst.domain == Domain::exact) return inst.a.apply(*inst.xi_star);
  std::vector<Rational> b(inst.m);
  Eigen::VectorXd xf = *inst.xi_float();
  for (std::size_t i = 0; i < inst.m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < inst.n; ++j) acc += to_double(inst.a(i, j)) * xf(j);
    b[i] = to_rational(acc);
  }
  return b;
}

}  // namespace

Instance generate(std::size_t m, std::size_t n, std::uint64_t seed, Domain domain, double sigma) {
  if (n < 1 || m < n) throw UsageError("m ≥ n required");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw UsageError("sigma must be finite and non-negative");
  if (sigma > 0.0 && domain == Domain::exact) throw UsageError("noise requires the float domain");

  Instance inst;
  inst.m = m;
  inst.n = n;
  inst.seed = seed;
  inst.domain = domain;

  SplitMix64 a_rng = derive_stream(seed, "A");
  inst.a = QMatrix(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) inst.a(i, j) = draw(a_rng, domain);
  }
  SplitMix64 xi_rng = derive_stream(seed, "xi");
  std::vector<Rational> xi(n);
  for (auto& v : xi) v = draw(xi_rng, domain);
  inst.xi_star = std::move(xi);

  // Fisher-Yates, descending index.
  SplitMix64 pi_rng = derive_stream(seed, "pi");
  Permutation pi = Permutation::identity(m);
  for (std::size_t i = m; i-- > 1;) {
    auto j = static_cast<std::size_t>(pi_rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(pi.image[i], pi.image[j]);
  }
  inst.y = pi.apply(clean_signal(inst));
  inst.pi = std::move(pi);
  return sigma > 0.0 ? with_noise(inst, sigma) : inst;
}

Instance with_noise(const Instance& base, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw UsageError("sigma must be finite and non-negative");
  if (sigma > 0.0 && base.domain == Domain::exact) throw UsageError("noise requires the float domain");
  Instance inst = base;
  inst.sigma = sigma;
  if (sigma == 0.0) return inst;
  if (!base.xi_star || !base.pi) throw UsageError("noise can only be added to a generated instance");
  inst.y = base.pi->apply(clean_signal(base));
  SplitMix64 noise = derive_stream(base.seed, "noise");
  for (auto& v : inst.y) v = to_rational(to_double(v) + sigma * noise.normal());
  return inst;
}

double snr_to_sigma(const Instance& inst, double snr_db) {
  double power = 0.0;
  if (inst.xi_star) {
    for (const auto& b : clean_signal(inst)) power += to_double(b) * to_double(b);
  } else {
    for (const auto& v : inst.y) power += to_double(v) * to_double(v);
  }
  power /= static_cast<double>(inst.m);
  if (!(power > 0.0)) throw DegenerateInput("zero signal power: SNR undefined");
  return std::sqrt(power / std::pow(10.0, snr_db / 10.0));
}

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.n < 1 || inst.m < inst.n) out.emplace_back("m ≥ n required");
  if (inst.a.rows() != inst.m || inst.a.cols() != inst.n) out.emplace_back("A shape does not match m x n");
  if (inst.y.size() != inst.m) out.emplace_back("y length does not match m");
  if (!(inst.sigma >= 0.0) || !std::isfinite(inst.sigma)) out.emplace_back("sigma must be finite and non-negative");
  if (inst.domain == Domain::exact && inst.sigma > 0.0) out.emplace_back("noise requires the float domain");
  if (inst.xi_star && inst.xi_star->size() != inst.n) out.emplace_back("xi_star length does not match n");
  if (inst.pi) {
    if (inst.pi->size() != inst.m) out.emplace_back("pi length does not match m");
    else if (!inst.pi->is_bijection()) out.emplace_back("pi not a bijection");
  }
  if (!out.empty()) return out;

  if (inst.xi_star && inst.pi && inst.sigma == 0.0) {
    std::vector<Rational> expected = inst.pi->apply(clean_signal(inst));
    bool ok = true;
    for (std::size_t i = 0; i < inst.m && ok; ++i) {
      if (inst.domain == Domain::exact) {
        ok = expected[i] == inst.y[i];
      } else {
        double e = to_double(expected[i]);
        double v = to_double(inst.y[i]);
        ok = std::abs(e - v) <= 1e-12 * std::max(1.0, std::abs(e));
      }
    }
    if (!ok) out.emplace_back("y is not pi(A xi_star)");
  }
  return out;
}

namespace {

std::string format_value(const Rational& q, Domain d) {
  return d == Domain::exact ? to_string(q) : format_double(to_double(q));
}

Rational parse_value(const std::string& s, Domain d) {
  return d == Domain::exact ? parse_rational(s) : to_rational(parse_double(s));
}

nlohmann::ordered_json string_array(const std::vector<Rational>& v, Domain d) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& q : v) arr.push_back(format_value(q, d));
  return arr;
}

std::vector<Rational> parse_array(const nlohmann::json& arr, Domain d) {
  if (!arr.is_array()) throw UsageError("expected an array of number strings");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) throw UsageError("numbers must be serialized as strings");
    out.push_back(parse_value(v.get<std::string>(), d));
  }
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["m"] = inst.m;
  j["n"] = inst.n;
  j["seed"] = inst.seed;
  j["domain"] = std::string(to_string(inst.domain));
  j["sigma"] = format_double(inst.sigma);
  auto a = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inst.a.rows(); ++i) {
    for (std::size_t k = 0; k < inst.a.cols(); ++k) a.push_back(format_value(inst.a(i, k), inst.domain));
  }
  j["A"] = std::move(a);
  if (inst.xi_star) j["xi_star"] = string_array(*inst.xi_star, inst.domain);
  if (inst.pi) j["pi"] = inst.pi->image;
  j["y"] = string_array(inst.y, inst.domain);
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  try {
    Instance inst;
    inst.m = j.at("m").get<std::size_t>();
    inst.n = j.at("n").get<std::size_t>();
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.domain = parse_domain(j.at("domain").get<std::string>());
    const auto& sig = j.at("sigma");
    inst.sigma = sig.is_string() ? parse_double(sig.get<std::string>()) : sig.get<double>();
    std::vector<Rational> flat = parse_array(j.at("A"), inst.domain);
    if (flat.size() != inst.m * inst.n) throw UsageError("A must hold m*n entries");
    inst.a = QMatrix(inst.m, inst.n);
    for (std::size_t i = 0; i < inst.m; ++i) {
      for (std::size_t k = 0; k < inst.n; ++k) inst.a(i, k) = flat[i * inst.n + k];
    }
    if (j.contains("xi_star")) inst.xi_star = parse_array(j["xi_star"], inst.domain);
    if (j.contains("pi")) inst.pi = Permutation{j["pi"].get<std::vector<std::size_t>>()};
    inst.y = parse_array(j.at("y"), inst.domain);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed instance JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed instance JSON: ") + e.what());
  }
}

std::string serialize(const Instance& inst) { return to_json(inst).dump(2) + "\n"; }

Instance parse_instance(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed instance JSON: ") + e.what());
  }
  return instance_from_json(j);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write instance file: " + path);
  out << serialize(inst);
}

}  // namespace unshuffle
