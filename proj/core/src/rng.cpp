#include "mechlab/rng.hpp"

#include "mechlab/errors.hpp"

namespace mechlab {

std::uint64_t Rng::next() {
  // splitmix64 (Steele, Lea, Flood 2014)
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractError("Rng::below requires bound > 0");
  // Lemire multiply-shift; the O(bound/2^64) bias is irrelevant here and the
  // result is platform-independent.
  const unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  return static_cast<std::uint64_t>(m >> 64);
}

long Rng::int_in(long lo, long hi) {
  if (hi < lo) throw ContractError("Rng::int_in requires lo <= hi");
  return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Rng::grid(long lo_num, long hi_num, long den) {
  return make_rational(int_in(lo_num, hi_num), den);
}

Rational Rng::unit_open(int bits) {
  const std::uint64_t den = 1ULL << bits;
  const std::uint64_t k = 1 + below(den - 1);
  Rational v(static_cast<unsigned long>(k), static_cast<unsigned long>(den));
  v.canonicalize();
  return v;
}

Rng Rng::fork(std::uint64_t stream) const {
  Rng mixer(state_ ^ (0xa0761d6478bd642fULL * (stream + 1)));
  return Rng(mixer.next());
}

}  // namespace mechlab
