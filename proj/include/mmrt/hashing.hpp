// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mmrt {

/// FNV-1a over raw bytes. Used for cache keys, mock dispatch and image
/// fingerprints; not a cryptographic hash.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t seed = 14695981039346656037ull) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

inline std::uint64_t fnv1a64(std::string_view text,
                             std::uint64_t seed = 14695981039346656037ull) {
    return fnv1a64(text.data(), text.size(), seed);
}

/// splitmix64 step; the standard way to fan one seed out into many streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive a named sub-seed from a master seed, so every component draws from
/// an independent deterministic stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t state = master ^ fnv1a64(label);
    return splitmix64(state);
}

/// Map a hash to [0, 1).
inline double hash_to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace mmrt
