#pragma once

#include <cstdint>
#include <random>

namespace flexi::detail {

// Stream used for the reference subsample of D under qr subsampling.
inline constexpr std::uint64_t kGlobalStream = ~std::uint64_t{0};

// Independent generator per (seed, stream, index) triple.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace flexi::detail
