#pragma once

#include <cstdint>
#include <string_view>

namespace deg {

/// Version string stamped into every output file header.
inline constexpr std::string_view kToolVersion = "0.1.0";

/// FNV-1a 64-bit hash; used to fingerprint config files in output headers.
[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace deg
