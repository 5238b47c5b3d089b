#include "flowfactory/random.hpp"

#include <bit>

#include "flowfactory/error.hpp"

namespace flowfactory {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t UniformSource::bits(unsigned k) {
  if (k == 0) return 0;
  if (k > 64) fail(ErrorCode::InvalidInstance, "at most 64 bits per draw");
  if (available_ >= k) {
    std::uint64_t out = k == 64 ? buffer_ : buffer_ & ((std::uint64_t{1} << k) - 1);
    buffer_ = k == 64 ? 0 : buffer_ >> k;
    available_ -= k;
    return out;
  }
  // Take what is left, then top up from a fresh word.
  const unsigned have = available_;
  std::uint64_t out = buffer_;
  std::uint64_t word = engine_();
  const unsigned need = k - have;
  std::uint64_t low = need == 64 ? word : word & ((std::uint64_t{1} << need) - 1);
  out |= low << have;
  buffer_ = need == 64 ? 0 : word >> need;
  available_ = 64 - need;
  return out;
}

std::uint64_t UniformSource::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::InvalidInstance, "uniform draw below zero");
  if (bound == 1) return 0;
  const auto width = static_cast<unsigned>(std::bit_width(bound - 1));
  for (;;) {
    std::uint64_t r = bits(width);
    if (r < bound) return r;
  }
}

BigInt UniformSource::below(const BigInt& bound) {
  if (bound <= 0) fail(ErrorCode::InvalidInstance, "uniform draw below a non-positive bound");
  if (bound.fits_ulong_p()) return BigInt(static_cast<unsigned long>(below(static_cast<std::uint64_t>(bound.get_ui()))));
  BigInt top = bound - 1;
  const auto width = mpz_sizeinbase(top.get_mpz_t(), 2);
  for (;;) {
    BigInt r = 0;
    std::size_t remaining = width;
    while (remaining > 0) {
      const auto chunk = static_cast<unsigned>(remaining >= 32 ? 32 : remaining);
      r <<= chunk;
      r += static_cast<unsigned long>(bits(chunk));
      remaining -= chunk;
    }
    if (r < bound) return r;
  }
}

}  // namespace flowfactory
