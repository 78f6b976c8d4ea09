#pragma once

#include <cstdint>
#include <string>

namespace bmarl {

// FNV-1a 64-bit content digest, printed as 16 hex chars. Used to stamp
// dataset files, checkpoints and run manifests with the configuration
// they were produced from so mismatches fail loudly instead of silently.
inline uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= static_cast<uint64_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string content_digest(const std::string& data) {
    static const char* hex = "0123456789abcdef";
    uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace bmarl
