#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace claw::support {

// SHA-256 digest. Used for anchor keys, shard checksums, and seed derivation.
struct Digest {
  std::array<unsigned char, 32> bytes{};

  bool operator==(const Digest& other) const { return bytes == other.bytes; }
  bool operator!=(const Digest& other) const { return !(*this == other); }
  bool operator<(const Digest& other) const { return bytes < other.bytes; }

  std::string hex() const;
  // First 8 bytes, big-endian. Handy as an RNG seed.
  std::uint64_t prefix64() const;
};

Digest sha256(std::string_view data);

std::string base64_encode(std::string_view data);
// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view data);

struct DigestHasher {
  std::size_t operator()(const Digest& d) const {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | d.bytes[i];
    return h;
  }
};

}  // namespace claw::support
