#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace hhmem {

// FNV-1a, 64-bit. Stable across platforms and runs; used for binding
// hashes, the test embedder, and snapshot content hashes.
inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t seed = 14695981039346656037ULL) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = seed;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

inline std::uint64_t fnv1a64(const std::string& text,
                             std::uint64_t seed = 14695981039346656037ULL) {
    return fnv1a64(text.data(), text.size(), seed);
}

// Canonical hash of a binding map: keys in sorted order, fields separated
// by unit separators so adjacent values cannot collide.
inline std::uint64_t hash_bindings(const std::map<std::string, std::string>& bindings) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const auto& [key, value] : bindings) {
        hash = fnv1a64(key, hash);
        hash = fnv1a64("\x1f", hash);
        hash = fnv1a64(value, hash);
        hash = fnv1a64("\x1e", hash);
    }
    return hash;
}

std::string to_hex(std::uint64_t value);

}  // namespace hhmem
