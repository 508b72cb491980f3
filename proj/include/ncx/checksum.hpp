#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ncx {

/// CRC-32 (zlib polynomial) of `data`.
std::uint32_t checksum(std::string_view data);

/// Same checksum as eight lowercase hex digits.
std::string checksum_hex(std::string_view data);

} // namespace ncx
