#include "unshuffle/rational.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace unshuffle {

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) {
    throw std::invalid_argument("malformed integer: '" + std::string(s) + "'");
  }
  if (s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

// Decimal with optional fraction and exponent, e.g. "-12.5e-3".
Rational parse_decimal(std::string_view s) {
  std::size_t epos = s.find_first_of("eE");
  long exponent = 0;
  if (epos != std::string_view::npos) {
    std::string_view exp_part = s.substr(epos + 1);
    if (!exp_part.empty() && exp_part[0] == '+') exp_part.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (ec != std::errc() || ptr != exp_part.data() + exp_part.size()) {
      throw std::invalid_argument("malformed exponent: '" + std::string(s) + "'");
    }
    s = s.substr(0, epos);
  }
  std::string digits;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  long frac_digits = 0;
  bool seen_dot = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed decimal");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
    } else {
      throw std::invalid_argument("malformed decimal: '" + std::string(s) + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("malformed decimal");
  mpz_class num(digits, 10);
  if (negative) num = -num;
  long shift = exponent - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  Rational q = shift >= 0 ? Rational(num * pow10) : Rational(num, pow10);
  q.canonicalize();
  return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (is_integer_literal(text)) return Rational(parse_integer(text));
    return parse_decimal(text);
  }
  mpz_class num = parse_integer(text.substr(0, slash));
  mpz_class den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::size_t bit_length(const Rational& q) {
  std::size_t a = mpz_sizeinbase(q.get_num_mpz_t(), 2);
  std::size_t b = mpz_sizeinbase(q.get_den_mpz_t(), 2);
  return a > b ? a : b;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed number: '" + std::string(text) + "'");
  }
  return v;
}

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value has no rational form");
  Rational q(v);  // exact binary value
  return q;
}

}  // namespace unshuffle
