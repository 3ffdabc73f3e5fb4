#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace unshuffle {

/// Exact rational number. mpq_class keeps the canonical form
/// (gcd(|num|, den) = 1, den > 0) after every arithmetic operation.
using Rational = mpq_class;

/// Formats as "p/q"; the denominator is always written, including "/1".
std::string to_string(const Rational& q);

/// Accepts "p/q", "p", or a finite decimal such as "-1.25" / "3e-2".
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Bit length of max(|num|, den).
std::size_t bit_length(const Rational& q);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Inverse of format_double. Throws std::invalid_argument.
double parse_double(std::string_view text);

/// Exact value of a finite double.
Rational to_rational(double v);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace unshuffle
