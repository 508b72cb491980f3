#include "ncx/checksum.hpp"

#include <zlib.h>

#include <cstdio>

namespace ncx {

std::uint32_t checksum(std::string_view data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large inputs in chunks.
    constexpr std::size_t chunk = 1u << 30;
    while (!data.empty()) {
        const auto n = data.size() < chunk ? data.size() : chunk;
        crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(n));
        data.remove_prefix(n);
    }
    return static_cast<std::uint32_t>(crc);
}

std::string checksum_hex(std::string_view data) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", checksum(data));
    return buf;
}

} // namespace ncx
