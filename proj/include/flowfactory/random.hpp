#pragma once

#include <cstdint>
#include <random>

#include "flowfactory/rational.hpp"

namespace flowfactory {

/// SplitMix64 finalizer over (seed, stream); used to derive independent
/// engine seeds from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Exact uniform randomness from a bit stream. Bounded draws use
/// rejection on ceil(log2 k) bits, so there is no modulo bias.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  bool bit() { return bits(1) != 0; }
  /// k <= 64 fresh bits.
  std::uint64_t bits(unsigned k);
  /// Uniform in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  BigInt below(const BigInt& bound);
  /// True with probability num/den (0 <= num <= den).
  bool bernoulli(const BigInt& num, const BigInt& den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t buffer_ = 0;
  unsigned available_ = 0;
};

}  // namespace flowfactory
