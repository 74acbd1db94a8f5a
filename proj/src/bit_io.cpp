#include "brng/bit_io.hpp"

#include <bit>
#include <cstring>

#include "brng/config_io.hpp"
#include "brng/error.hpp"

namespace brng {
namespace {

static_assert(std::endian::native == std::endian::little, "bit file headers are host byte order");

constexpr char kMagic[4] = {'B', 'R', 'N', 'G'};
constexpr std::uint32_t kVersion = 1;

struct Header {
  std::uint64_t n_bits = 0;
  std::uint32_t pad = 0;
  double f_s = 0.0;
  double boundary = 0.0;
  std::uint64_t seed = 0;
};

template <class T>
void put(char*& p, T v) {
  std::memcpy(p, &v, sizeof v);
  p += sizeof v;
}

template <class T>
T get(const char*& p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  p += sizeof v;
  return v;
}

void encode(const Header& h, char (&buf)[kPackedHeaderBytes]) {
  char* p = buf;
  std::memcpy(p, kMagic, 4);
  p += 4;
  put(p, kVersion);
  put(p, h.n_bits);
  put(p, h.pad);
  put(p, h.f_s);
  put(p, h.boundary);
  put(p, h.seed);
}

Header decode(const char (&buf)[kPackedHeaderBytes], const std::string& origin) {
  if (std::memcmp(buf, kMagic, 4) != 0) throw IoError(origin + ": bad magic");
  const char* p = buf + 4;
  const auto version = get<std::uint32_t>(p);
  if (version != kVersion) throw IoError(origin + ": unsupported version " + std::to_string(version));
  Header h;
  h.n_bits = get<std::uint64_t>(p);
  h.pad = get<std::uint32_t>(p);
  h.f_s = get<double>(p);
  h.boundary = get<double>(p);
  h.seed = get<std::uint64_t>(p);
  if (h.pad != (8 - h.n_bits % 8) % 8) throw IoError(origin + ": pad field inconsistent with bit count");
  return h;
}

Header header_of(const BitStream& bs, std::uint64_t n) {
  return {n, static_cast<std::uint32_t>((8 - n % 8) % 8), bs.f_s, bs.boundary, bs.seed};
}

void write_sidecar(const std::filesystem::path& path, const BitStream& bs, BitFormat f, std::uint64_t n) {
  nlohmann::json j = to_json(bs);
  j["n_bits"] = n;
  j["format"] = to_string(f);
  write_json_file(sidecar_path(path), j);
}

}  // namespace

std::string to_string(BitFormat f) { return f == BitFormat::kPacked ? "packed" : "ascii01"; }

BitFormat bit_format_from_string(const std::string& s) {
  if (s == "packed") return BitFormat::kPacked;
  if (s == "ascii01") return BitFormat::kAscii01;
  throw ConfigError("unknown bit format '" + s + "' (packed | ascii01)");
}

std::vector<std::uint8_t> pack_msb_first(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

std::vector<std::uint8_t> unpack_msb_first(std::span<const std::uint8_t> bytes, std::uint64_t n_bits) {
  if (bytes.size() * 8 < n_bits) throw IoError("payload shorter than declared bit count");
  std::vector<std::uint8_t> out(n_bits);
  for (std::uint64_t i = 0; i < n_bits; ++i) out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  return out;
}

nlohmann::json to_json(const BitStream& bs) {
  return {{"n_bits", bs.bits.size()},
          {"f_s", bs.f_s},
          {"f_s_requested", bs.f_s_requested},
          {"boundary", bs.boundary},
          {"omega1", bs.omega1},
          {"omega2", bs.omega2},
          {"seed", bs.seed},
          {"simulated_time", bs.simulated_time},
          {"ones_fraction", bs.ones_fraction},
          {"dt", bs.dt},
          {"steps_per_sample", bs.steps_per_sample},
          {"burn_in_steps", bs.burn_in_steps},
          {"params_digest", bs.params_digest}};
}

std::filesystem::path sidecar_path(const std::filesystem::path& bits_file) {
  return std::filesystem::path(bits_file.string() + ".json");
}

void export_bits(const std::filesystem::path& path, const BitStream& bs, BitFormat format) {
  BitFileWriter w(path, format);
  w.write(bs.bits);
  w.close(bs);
}

BitStream import_bits(const std::filesystem::path& path, std::optional<BitFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (!format) {
    format = raw.size() >= 4 && std::memcmp(raw.data(), kMagic, 4) == 0 ? BitFormat::kPacked
                                                                         : BitFormat::kAscii01;
  }
  BitStream bs;
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    const json j = read_json_file(side);
    bs.f_s = j.value("f_s", 0.0);
    bs.f_s_requested = j.value("f_s_requested", 0.0);
    bs.boundary = j.value("boundary", 0.0);
    bs.omega1 = j.value("omega1", 0.0);
    bs.omega2 = j.value("omega2", 0.0);
    bs.seed = j.value("seed", std::uint64_t{0});
    bs.dt = j.value("dt", 0.0);
    bs.steps_per_sample = j.value("steps_per_sample", std::uint64_t{0});
    bs.burn_in_steps = j.value("burn_in_steps", std::uint64_t{0});
    bs.params_digest = j.value("params_digest", "");
  }
  if (*format == BitFormat::kPacked) {
    if (raw.size() < kPackedHeaderBytes) throw IoError(path.string() + ": truncated header");
    char buf[kPackedHeaderBytes];
    std::memcpy(buf, raw.data(), kPackedHeaderBytes);
    const Header h = decode(buf, path.string());
    const std::uint64_t payload = raw.size() - kPackedHeaderBytes;
    if (payload != (h.n_bits + 7) / 8) throw IoError(path.string() + ": payload size mismatch");
    bs.bits = unpack_msb_first(
        std::span(reinterpret_cast<const std::uint8_t*>(raw.data()) + kPackedHeaderBytes, payload),
        h.n_bits);
    bs.f_s = h.f_s;
    bs.boundary = h.boundary;
    bs.seed = h.seed;
  } else {
    bs.bits.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const char c = raw[i];
      if (c == '0' || c == '1') {
        bs.bits.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (c != '\n' && c != '\r' && c != ' ' && c != '\t') {
        throw IoError(path.string() + ": unexpected character at byte " + std::to_string(i));
      }
    }
  }
  bs.refresh_summary();
  return bs;
}

BitFileWriter::BitFileWriter(const std::filesystem::path& path, BitFormat format)
    : path_(path), format_(format), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  if (format_ == BitFormat::kPacked) {
    char buf[kPackedHeaderBytes];
    encode(Header{}, buf);
    out_.write(buf, sizeof buf);
  }
}

BitFileWriter::~BitFileWriter() {
  if (open_) {
    try {
      close(BitStream{});
    } catch (...) {
    }
  }
}

void BitFileWriter::write(std::span<const std::uint8_t> bits) {
  if (!open_) throw IoError("write after close");
  if (format_ == BitFormat::kAscii01) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  } else {
    for (std::uint8_t b : bits) {
      partial_ = static_cast<std::uint8_t>((partial_ << 1) | (b ? 1 : 0));
      if (++filled_ == 8) {
        out_.put(static_cast<char>(partial_));
        partial_ = 0;
        filled_ = 0;
      }
    }
  }
  count_ += bits.size();
}

void BitFileWriter::close(const BitStream& meta) {
  if (!open_) return;
  open_ = false;
  if (format_ == BitFormat::kPacked) {
    if (filled_ > 0) out_.put(static_cast<char>(partial_ << (8 - filled_)));
    char buf[kPackedHeaderBytes];
    encode(header_of(meta, count_), buf);
    out_.seekp(0);
    out_.write(buf, sizeof buf);
  }
  out_.close();
  if (!out_) throw IoError("write failed: " + path_.string());
  write_sidecar(path_, meta, format_, count_);
}

}  // namespace brng
