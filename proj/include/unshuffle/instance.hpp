#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "unshuffle/qmatrix.hpp"
#include "unshuffle/rational.hpp"

namespace unshuffle {

enum class Domain { exact, floating };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view s);

/// A permutation of {0, ..., m-1}. Convention used throughout: a response
/// y is the permuted image of a clean vector b when y[image[i]] = b[i].
struct Permutation {
  std::vector<std::size_t> image;

  static Permutation identity(std::size_t m);
  std::size_t size() const { return image.size(); }
  bool is_bijection() const;
  Permutation inverse() const;

  /// out[image[i]] = v[i].
  template <class V>
  V apply(const V& v) const {
    V out = v;
    for (std::size_t i = 0; i < image.size(); ++i) out[image[i]] = v[i];
    return out;
  }

  /// out[i] = v[image[i]]; undoes apply.
  template <class V>
  V unapply(const V& v) const {
    V out = v;
    for (std::size_t i = 0; i < image.size(); ++i) out[i] = v[image[i]];
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

/// One unlabeled-sensing problem. Values are stored as rationals in both
/// domains; in the float domain every entry is the exact value of a double.
struct Instance {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Domain domain = Domain::exact;
  double sigma = 0.0;
  QMatrix a;
  std::optional<std::vector<Rational>> xi_star;
  std::optional<Permutation> pi;
  std::vector<Rational> y;

  Eigen::MatrixXd a_float() const;
  Eigen::VectorXd y_float() const;
  std::optional<Eigen::VectorXd> xi_float() const;
};

/// Draws A and xi* from seeded streams ("A", "xi"), a uniform permutation
/// ("pi"), and sets y = pi(A xi*) plus N(0, sigma^2) noise ("noise").
///
/// Exact domain: entries p/q with p uniform in [-10^4, 10^4] and q uniform in
/// [1, 10^2]. Float domain: standard normal entries.
Instance generate(std::size_t m, std::size_t n, std::uint64_t seed, Domain domain, double sigma = 0.0);

/// Same instance as `base` with the noise stream re-applied at level sigma.
Instance with_noise(const Instance& base, double sigma);

/// sigma giving 10 log10((||A xi*||^2 / m) / sigma^2) = snr_db.
double snr_to_sigma(const Instance& inst, double snr_db);

/// Empty iff every Instance invariant holds; each entry names one violation.
std::vector<std::string> validate(const Instance& inst);

nlohmann::ordered_json to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

/// Canonical text form: two-space indented JSON plus a trailing newline.
std::string serialize(const Instance& inst);
Instance parse_instance(std::string_view text);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

}  // namespace unshuffle
