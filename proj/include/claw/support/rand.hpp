#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "claw/support/hash.hpp"

namespace claw::support {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 bits of entropy. Written out explicitly so
// the draw sequence is identical on every platform (std::uniform_real_distribution
// is implementation-defined).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index in [0, n). Requires n >= 1.
inline std::size_t pick_index(Rng& rng, std::size_t n) {
  auto idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return idx >= n ? n - 1 : idx;
}

// Fisher-Yates with the portable draws above.
template <typename T>
void shuffle_vec(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = pick_index(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

// Deterministic seed derivation: hash the joined tag parts. Each distinct tag
// path gets an independent stream.
inline std::uint64_t derive_seed(std::initializer_list<std::string> parts) {
  std::string joined;
  for (const auto& p : parts) {
    joined += p;
    joined.push_back('\x1f');
  }
  return sha256(joined).prefix64();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string> parts) {
  std::string joined = std::to_string(base);
  joined.push_back('\x1f');
  for (const auto& p : parts) {
    joined += p;
    joined.push_back('\x1f');
  }
  return sha256(joined).prefix64();
}

}  // namespace claw::support
