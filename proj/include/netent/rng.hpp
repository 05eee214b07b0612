#pragma once

#include <cstdint>
#include <random>

namespace netent {

using Rng = std::mt19937_64;

// Independent stream for (seed, stream), e.g. one per Monte Carlo trial, so
// trial results do not depend on evaluation order.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x6e657465u};
  return Rng(seq);
}

}  // namespace netent
