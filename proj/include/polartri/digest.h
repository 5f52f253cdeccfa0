#pragma once

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>

namespace polartri {

// 64-bit FNV-1a, chainable through `state`.
inline uint64_t fnv1a64(std::span<const uint8_t> bytes, uint64_t state = 0xcbf29ce484222325ull) {
    for (uint8_t b : bytes) {
        state ^= b;
        state *= 0x100000001b3ull;
    }
    return state;
}

inline std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace polartri
