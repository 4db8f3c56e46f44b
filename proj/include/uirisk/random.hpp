#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uirisk {

/// 64-bit FNV-1a of a stream name such as "folding.empirical_folding_score".
constexpr std::uint64_t stream_hash(std::string_view name) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Engine for substream `index` of the named stream under a run seed. The
/// same (seed, stream, index) gives the same sequence on every platform.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0) {
  const std::uint64_t mixed = splitmix64(splitmix64(seed ^ stream_hash(stream)) + index);
  return std::mt19937_64(mixed);
}

/// Uniform on [0, 1) from the top 53 bits; avoids the implementation-defined
/// std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
inline double uniform01_open_left(std::mt19937_64& rng) { return 1.0 - uniform01(rng); }

}  // namespace uirisk
