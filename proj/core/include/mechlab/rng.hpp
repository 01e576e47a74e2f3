#pragma once

#include <cstdint>

#include "mechlab/rational.hpp"

namespace mechlab {

/// Deterministic, platform-independent PRNG (splitmix64). std::mt19937 with
/// std distributions is implementation-defined across standard libraries;
/// reports must replay bit-identically from (generator id, seed) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform integer in [lo, hi] inclusive.
  long int_in(long lo, long hi);

  /// Uniform rational k/den with k in [loNum, hiNum].
  Rational grid(long lo_num, long hi_num, long den);

  /// Uniform rational strictly inside (0,1): k/2^bits, k in [1, 2^bits - 1].
  Rational unit_open(int bits = 20);

  bool coin() { return (next() & 1u) != 0; }

  /// Derives an independent stream; deterministic in (parent seed, stream id).
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

}  // namespace mechlab
