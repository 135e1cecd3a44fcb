#pragma once

#include <cstdint>
#include <random>

namespace wdecon {

using Rng = std::mt19937_64;

//! Counter-based seed splitting: every (seed, stream, index) triple maps to a
//! well-mixed 64-bit seed, so replications and streams never share state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index = 0)
{
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ stream) + index);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0)
{
  return Rng(derive_seed(seed, stream, index));
}

// U(0,1) open on the left so log/tan transforms stay finite.
inline double uniform_open(Rng& rng)
{
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace wdecon
