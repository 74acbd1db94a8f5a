#pragma once

// Bit files.
//
// packed: 44-byte little-endian header followed by the bits, MSB first,
//   offset size field
//        0    4 magic "BRNG"
//        4    4 u32 version (1)
//        8    8 u64 bit count
//       16    4 u32 pad bits in the final byte
//       20    8 f64 sampling frequency (Hz)
//       28    8 f64 boundary (|a2|^2)
//       36    8 u64 seed
// ascii01: one '0' or '1' character per bit, no separators.
// Both are accompanied by a JSON sidecar <file>.json with all metadata.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <vector>

#include "brng/bitgen.hpp"

namespace brng {

enum class BitFormat { kPacked, kAscii01 };

std::string to_string(BitFormat f);
BitFormat bit_format_from_string(const std::string& s);

inline constexpr std::size_t kPackedHeaderBytes = 44;

std::vector<std::uint8_t> pack_msb_first(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> unpack_msb_first(std::span<const std::uint8_t> bytes, std::uint64_t n_bits);

nlohmann::json to_json(const BitStream& bs);  ///< metadata only
std::filesystem::path sidecar_path(const std::filesystem::path& bits_file);

/// Writes the bit file and its sidecar.
void export_bits(const std::filesystem::path& path, const BitStream& bs, BitFormat format);

/// Format from the magic bytes unless given; metadata from the packed header
/// and, when present, the sidecar.
BitStream import_bits(const std::filesystem::path& path, std::optional<BitFormat> format = std::nullopt);

/// Streaming writer for either format; the packed header is patched on close.
class BitFileWriter {
 public:
  BitFileWriter(const std::filesystem::path& path, BitFormat format);
  ~BitFileWriter();
  BitFileWriter(const BitFileWriter&) = delete;
  BitFileWriter& operator=(const BitFileWriter&) = delete;

  void write(std::span<const std::uint8_t> bits);
  /// Finalizes the header from `meta` (bit count is taken from the writer).
  void close(const BitStream& meta);

 private:
  std::filesystem::path path_;
  BitFormat format_;
  std::ofstream out_;
  std::uint8_t partial_ = 0;
  int filled_ = 0;
  std::uint64_t count_ = 0;
  bool open_ = true;
};

}  // namespace brng
