#pragma once

#include <cstdint>
#include <random>

namespace rdo {

using Rng = std::mt19937_64;

// Independent stream for one (seed, generation, slot) triple. Streams depend
// only on the triple, never on evaluation order or thread count.
Rng make_stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t slot);

std::uint64_t mix64(std::uint64_t x) noexcept;

// Uniform draw in [0, 1).
inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace rdo
