// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace delaykit {

/// Engine behind every random stream. One instance per thread, never shared.
using RandomStream = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mixer used to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sub-stream `index` of a run seeded with `seed`.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index));
}

/// Uniform draw on the open interval (0, 1) built from the top 53 bits.
inline double uniform_open01(RandomStream& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Unit-rate exponential draw.
inline double standard_exponential(RandomStream& rng) { return -std::log(uniform_open01(rng)); }

}  // namespace delaykit
