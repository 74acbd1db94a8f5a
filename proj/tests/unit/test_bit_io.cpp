#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "brng/bit_io.hpp"
#include "brng/error.hpp"

using namespace brng;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "brng_unit_bit_io";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

BitStream stream(std::vector<std::uint8_t> bits) {
  BitStream bs;
  bs.bits = std::move(bits);
  bs.f_s = 1.25e7;
  bs.boundary = 3900.5;
  bs.seed = 0xfeedULL;
  bs.omega1 = 3.6e11;
  bs.dt = 1e-12;
  bs.refresh_summary();
  return bs;
}

}  // namespace

TEST_SUITE("bit_io") {
  TEST_CASE("msb-first packing") {
    CHECK(pack_msb_first(std::vector<std::uint8_t>{1, 0, 0, 0, 0, 0, 0, 1}) == std::vector<std::uint8_t>{0x81});
    const std::vector<std::uint8_t> nine{1, 0, 1, 0, 1, 0, 1, 0, 1};
    CHECK(pack_msb_first(nine) == std::vector<std::uint8_t>{0xAA, 0x80});
    CHECK(unpack_msb_first(std::vector<std::uint8_t>{0xAA, 0x80}, 9) == nine);
    CHECK_THROWS_AS(unpack_msb_first(std::vector<std::uint8_t>{0xAA}, 9), IoError);
  }

  TEST_CASE("packed header layout") {
    const fs::path path = scratch("nine.bin");
    export_bits(path, stream({1, 0, 1, 0, 1, 0, 1, 0, 1}), BitFormat::kPacked);
    const auto raw = slurp(path);
    REQUIRE(raw.size() == kPackedHeaderBytes + 2);
    CHECK(std::memcmp(raw.data(), "BRNG", 4) == 0);
    std::uint32_t version, pad;
    std::uint64_t n, seed;
    double f_s, boundary;
    std::memcpy(&version, raw.data() + 4, 4);
    std::memcpy(&n, raw.data() + 8, 8);
    std::memcpy(&pad, raw.data() + 16, 4);
    std::memcpy(&f_s, raw.data() + 20, 8);
    std::memcpy(&boundary, raw.data() + 28, 8);
    std::memcpy(&seed, raw.data() + 36, 8);
    CHECK(version == 1);
    CHECK(n == 9);
    CHECK(pad == 7);
    CHECK(f_s == 1.25e7);
    CHECK(boundary == 3900.5);
    CHECK(seed == 0xfeedULL);
    CHECK(static_cast<unsigned char>(raw[44]) == 0xAA);
    CHECK(static_cast<unsigned char>(raw[45]) == 0x80);
    CHECK(fs::exists(sidecar_path(path)));
  }

  TEST_CASE("round trips") {
    std::vector<std::uint8_t> bits(1001);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (i * 2654435761u >> 7) & 1;
    const BitStream bs = stream(bits);
    for (BitFormat f : {BitFormat::kPacked, BitFormat::kAscii01}) {
      const fs::path path = scratch(f == BitFormat::kPacked ? "rt.bin" : "rt.txt");
      export_bits(path, bs, f);
      const BitStream r = import_bits(path);
      CHECK(r.bits == bits);
      CHECK(r.f_s == bs.f_s);
      CHECK(r.boundary == bs.boundary);
      CHECK(r.seed == bs.seed);
      CHECK(r.omega1 == bs.omega1);
      CHECK(r.ones_fraction == bs.ones_fraction);
      CHECK(import_bits(path, f).bits == bits);
    }
    const auto txt = slurp(scratch("rt.txt"));
    CHECK(txt.size() == bits.size());
    CHECK(txt[0] == (bits[0] ? '1' : '0'));
  }

  TEST_CASE("streaming writer matches export") {
    std::vector<std::uint8_t> bits(77);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = i % 3 == 0;
    const BitStream bs = stream(bits);
    for (BitFormat f : {BitFormat::kPacked, BitFormat::kAscii01}) {
      const fs::path a = scratch("export." + to_string(f)), b = scratch("stream." + to_string(f));
      export_bits(a, bs, f);
      {
        BitFileWriter w(b, f);
        for (std::size_t i = 0; i < bits.size(); i += 10)
          w.write(std::span(bits).subspan(i, std::min<std::size_t>(10, bits.size() - i)));
        BitStream meta = bs;
        meta.bits.clear();
        w.close(meta);
        CHECK_THROWS_AS(w.write(bits), IoError);
      }
      CHECK(slurp(a) == slurp(b));
    }
  }

  TEST_CASE("malformed files") {
    const fs::path bad = scratch("bad.txt");
    std::ofstream(bad) << "0101x1";
    CHECK_THROWS_AS(import_bits(bad, BitFormat::kAscii01), IoError);
    const fs::path magic = scratch("magic.bin");
    std::ofstream(magic, std::ios::binary) << std::string(60, 'Z');
    CHECK_THROWS_AS(import_bits(magic, BitFormat::kPacked), IoError);
    CHECK_THROWS_AS(import_bits(scratch("absent.bin")), IoError);

    const fs::path cut = scratch("cut.bin");
    export_bits(cut, stream(std::vector<std::uint8_t>(64, 1)), BitFormat::kPacked);
    fs::remove(sidecar_path(cut));
    fs::resize_file(cut, fs::file_size(cut) - 1);
    CHECK_THROWS_AS(import_bits(cut), IoError);
  }

  TEST_CASE("format names") {
    CHECK(bit_format_from_string("packed") == BitFormat::kPacked);
    CHECK(to_string(BitFormat::kAscii01) == "ascii01");
    CHECK_THROWS_AS(bit_format_from_string("hex"), ConfigError);
  }
}
