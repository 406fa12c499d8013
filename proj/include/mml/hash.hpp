#pragma once

#include <cstdint>
#include <string_view>

namespace mml {

/// FNV-1a 64-bit hash; used to derive per-item RNG streams and to fingerprint
/// configuration text in run manifests.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace mml
