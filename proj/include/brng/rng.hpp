#pragma once

// Random engine for the thermal-noise path: xoshiro256++ (Blackman & Vigna)
// seeded through splitmix64, paired with Boost's ziggurat normal sampler.

#include <boost/random/normal_distribution.hpp>
#include <cstdint>

namespace brng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seed for run `index` of a family sharing `master_seed`, so independent
/// runs never share engine state.
inline std::uint64_t substream(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed ^ (0xd1b54a32d192ed03ull * (index + 1));
  splitmix64(s);
  return splitmix64(s);
}

class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed = 0) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  bool operator==(const Xoshiro256pp&) const = default;

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

using Engine = Xoshiro256pp;
using NormalDistribution = boost::random::normal_distribution<double>;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

}  // namespace brng
