#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ncx {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under `base`. Distinct indices give
/// statistically independent streams, so walk j draws the same numbers
/// whether walks run serially or in parallel.
constexpr std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) noexcept {
    return mix64(base ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Rng substream(std::uint64_t base, std::uint64_t index) {
    return Rng{substream_seed(base, index)};
}

/// Uniform integer in [0, n). `n` must be positive.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace ncx
