#include "rdo/random.hpp"

namespace rdo {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t slot) {
  const std::uint64_t key = mix64(mix64(mix64(seed) ^ generation) ^ slot);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(generation), static_cast<std::uint32_t>(slot)};
  return Rng(seq);
}

} // namespace rdo
