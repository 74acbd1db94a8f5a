#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace brng::testing {

/// Two-state Markov telegraph signal sampled every dt: leaves the low state
/// at rate k_up and the high state at rate k_down, so the mean dwell times
/// are 1/k_up and 1/k_down and the high-state occupancy is
/// k_up / (k_up + k_down). Optional Gaussian noise on both levels.
struct Telegraph {
  double k_up = 1.0;
  double k_down = 1.0;
  double low = 1.0;
  double high = 10.0;
  double noise = 0.0;
  std::uint64_t seed = 1;

  std::vector<double> sample(std::size_t n, double dt) const {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> up(k_up), down(k_down);
    std::normal_distribution<double> jitter(0.0, 1.0);
    std::vector<double> x;
    x.reserve(n);
    bool on = false;
    double t = 0.0, next_flip = up(rng);
    for (std::size_t i = 0; i < n; ++i, t += dt) {
      while (t >= next_flip) {
        on = !on;
        next_flip += on ? down(rng) : up(rng);
      }
      double v = on ? high : low;
      if (noise > 0.0) v += noise * jitter(rng);
      x.push_back(v);
    }
    return x;
  }
};

}  // namespace brng::testing
