#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rca {

// FNV-1a 64-bit. Non-cryptographic; used for content digests (candidate
// sources, catalogs, configs) where we only need stability and cheap
// equality, not collision resistance.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view data) {
    static const char* hexdig = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexdig[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace rca
