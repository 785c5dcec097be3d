#pragma once
// Content checksums for run manifests: 64-bit FNV-1a over raw bytes.

#include <cstdio>
#include <fstream>
#include <string>

#include "corex/common.hpp"

namespace corex {

inline u64 fnv1a64(const void* data, std::size_t n, u64 h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline u64 fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

struct FileDigest {
    u64 bytes = 0;
    u64 checksum = 0;
};

inline FileDigest digest_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open file for checksum: " + path);
    FileDigest d;
    u64 h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        std::streamsize got = f.gcount();
        if (got <= 0) break;
        h = fnv1a64(buf, std::size_t(got), h);
        d.bytes += u64(got);
    }
    d.checksum = h;
    return d;
}

inline std::string checksum_hex(u64 h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

}  // namespace corex
