#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace brng {

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace brng
