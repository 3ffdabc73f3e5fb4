#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace unshuffle {

/// SplitMix64 (Steele, Lea & Flood 2014): state += 0x9e3779b97f4a7c15, then
/// the standard xor-shift-multiply finalizer. Every derived quantity below is
/// defined in terms of next_u64 so other implementations can reproduce streams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform integer in [lo, hi] by rejection on the top of the 64-bit range.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// (next_u64() >> 11) * 2^-53, in [0, 1).
  double uniform01();

  /// Standard normal by Box-Muller: u1 = 1 - uniform01(), u2 = uniform01(),
  /// returns sqrt(-2 ln u1) cos(2 pi u2), then sqrt(-2 ln u1) sin(2 pi u2) on
  /// the following call.
  double normal();

  /// Child stream: SplitMix64(mix64(seed_of_this_stream ^ fnv1a64(label))).
  /// Depends only on the construction seed, not on how much has been drawn.
  SplitMix64 split(std::string_view label) const;

 private:
  std::uint64_t state_;
  std::uint64_t origin_ = state_;
  std::optional<double> spare_;
};

/// The SplitMix64 output finalizer applied to one word.
std::uint64_t mix64(std::uint64_t z);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Stream for a labelled purpose derived from a master seed.
SplitMix64 derive_stream(std::uint64_t master_seed, std::string_view label);

}  // namespace unshuffle
