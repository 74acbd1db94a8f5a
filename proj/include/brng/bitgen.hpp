#pragma once

// Coin-flip bit extraction: the laser runs continuously and |a2|^2 is
// compared with the boundary once every 1/f_s of simulated time,
// f_s = 1 / (divisor * T_1/2). Bit 1 means the generating state.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brng/calibrate.hpp"
#include "brng/sde.hpp"
#include "brng/trace_stats.hpp"

namespace brng {

struct SamplingOptions {
  double divisor = 4.0;
  double balance_tolerance = 0.15;  ///< relative |tau_ng - tau_g| allowed
};

/// 1 / (divisor * ln 2 * (tau_ng + tau_g) / 2). Throws UnbalancedLifetimes.
double sampling_frequency(const DwellStats& d, const SamplingOptions& opts = {});

struct BitStream {
  std::vector<std::uint8_t> bits;  ///< one 0/1 value per element
  double f_s = 0.0;                ///< effective rate, 1 / (steps_per_sample * dt)
  double f_s_requested = 0.0;
  double boundary = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  std::uint64_t seed = 0;
  double simulated_time = 0.0;     ///< n_bits / f_s
  double ones_fraction = 0.0;
  double dt = 0.0;
  std::uint64_t steps_per_sample = 0;
  std::uint64_t burn_in_steps = 0;
  std::string params_digest;

  std::size_t size() const { return bits.size(); }
  void refresh_summary();  ///< recompute ones_fraction and simulated_time
};

struct BitGenOptions {
  double dt = 1e-12;
  Scheme scheme = Scheme::kStochasticHeun;
  double noise_scale = 1.0;
  std::optional<double> burn_in_time;  ///< default: 20 dwell times, at least 100 / gamma1
  SamplingOptions sampling;
  std::optional<double> f_s;           ///< bypasses sampling_frequency()
};

/// Pull-based generator; memory use does not grow with the number of bits.
class BitSource {
 public:
  BitSource(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t seed,
            const BitGenOptions& opts = {});

  std::uint8_t next();
  void fill(std::span<std::uint8_t> out);

  std::uint64_t produced() const { return produced_; }
  std::uint64_t ones() const { return ones_; }
  /// Metadata of the stream so far, without the bits.
  BitStream metadata() const;
  /// The SimConfig whose recorded frames coincide with the sample instants.
  SimConfig equivalent_sim_config(std::uint64_t n_bits) const;
  const PhysicalParams& params() const { return params_; }

 private:
  PhysicalParams params_;
  BitStream meta_;
  Scheme scheme_;
  double noise_scale_;
  ModeIntegrator integrator_;
  double boundary_;
  std::uint64_t produced_ = 0;
  std::uint64_t ones_ = 0;
};

BitStream generate_bits(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t n_bits,
                        std::uint64_t seed, const BitGenOptions& opts = {});

/// Streams bits to `sink` in blocks; returns metadata with an empty bit vector.
BitStream generate_bits_to(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t n_bits,
                           std::uint64_t seed,
                           const std::function<void(std::span<const std::uint8_t>)>& sink,
                           const BitGenOptions& opts = {}, std::size_t block = 4096);

/// Comparator applied to every `every`-th sample of a recorded trace.
std::vector<std::uint8_t> bits_from_samples(std::span<const double> a2_sq, double boundary,
                                            std::size_t every = 1);
std::vector<std::uint8_t> bits_from_trajectory(const Trajectory& traj, double boundary,
                                               std::size_t every = 1);

/// Lag-k autocorrelation of a 0/1 sequence.
double bit_autocorrelation(std::span<const std::uint8_t> bits, std::size_t lag = 1);

}  // namespace brng
