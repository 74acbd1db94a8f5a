#include "brng/bitgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "brng/config_io.hpp"
#include "brng/error.hpp"

namespace brng {

double sampling_frequency(const DwellStats& d, const SamplingOptions& opts) {
  if (!(opts.divisor > 0.0)) throw DomainError("sampling divisor must be positive");
  const double tau = 0.5 * (d.tau_ng + d.tau_g);
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("lifetimes must be positive and finite");
  if (std::abs(d.tau_ng - d.tau_g) > opts.balance_tolerance * tau) {
    throw UnbalancedLifetimes("tau_ng = " + std::to_string(d.tau_ng) + " s and tau_g = " +
                              std::to_string(d.tau_g) + " s differ by more than " +
                              std::to_string(opts.balance_tolerance * 100) + "%");
  }
  return 1.0 / (opts.divisor * std::numbers::ln2 * tau);
}

void BitStream::refresh_summary() {
  const auto n = static_cast<double>(bits.size());
  const auto ones = std::count(bits.begin(), bits.end(), std::uint8_t{1});
  ones_fraction = bits.empty() ? 0.0 : static_cast<double>(ones) / n;
  simulated_time = f_s > 0.0 ? n / f_s : 0.0;
}

namespace {

PhysicalParams at_point(const PhysicalParams& p, const BalancePoint& c) {
  PhysicalParams q = p;
  q.omega_pump1 = c.omega1_star;
  q.omega_pump2 = c.omega2;
  return q;
}

}  // namespace

BitSource::BitSource(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t seed,
                     const BitGenOptions& opts)
    : params_(at_point(p, calib)),
      scheme_(opts.scheme),
      noise_scale_(opts.noise_scale),
      integrator_(params_, opts.scheme, opts.dt, seed, opts.noise_scale, non_generating_state(params_)),
      boundary_(calib.boundary) {
  if (std::isnan(boundary_)) throw DomainError("boundary is NaN");
  validate(params_);
  meta_.f_s_requested = opts.f_s ? *opts.f_s : sampling_frequency(calib.as_dwell(), opts.sampling);
  if (!(meta_.f_s_requested > 0.0)) throw DomainError("sampling frequency must be positive");
  meta_.steps_per_sample = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(1.0 / (meta_.f_s_requested * opts.dt))));
  meta_.dt = opts.dt;
  meta_.f_s = 1.0 / (static_cast<double>(meta_.steps_per_sample) * opts.dt);
  meta_.boundary = boundary_;
  meta_.omega1 = calib.omega1_star;
  meta_.omega2 = calib.omega2;
  meta_.seed = seed;
  const std::optional<double> dwell =
      calib.tau > 0.0 ? std::optional<double>(calib.tau) : std::nullopt;
  meta_.burn_in_steps = opts.burn_in_time
                            ? static_cast<std::uint64_t>(std::ceil(*opts.burn_in_time / opts.dt))
                            : default_burn_in_steps(params_, opts.dt, dwell);

  SimConfig probe = equivalent_sim_config(1);
  check_config(params_, probe);
  meta_.params_digest = params_digest(params_, probe);
  integrator_.advance(meta_.burn_in_steps);
}

SimConfig BitSource::equivalent_sim_config(std::uint64_t n_bits) const {
  SimConfig c;
  c.dt = meta_.dt;
  c.burn_in_steps = meta_.burn_in_steps;
  c.record_stride = meta_.steps_per_sample;
  c.n_steps = meta_.burn_in_steps + n_bits * meta_.steps_per_sample;
  c.seed = meta_.seed;
  c.scheme = scheme_;
  c.noise_scale = noise_scale_;
  return c;
}

std::uint8_t BitSource::next() {
  integrator_.advance(meta_.steps_per_sample);
  const std::uint8_t bit = std::norm(integrator_.state().a2) > boundary_ ? 1 : 0;
  ++produced_;
  ones_ += bit;
  return bit;
}

void BitSource::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) b = next();
}

BitStream BitSource::metadata() const {
  BitStream m = meta_;
  const auto n = static_cast<double>(produced_);
  m.ones_fraction = produced_ ? static_cast<double>(ones_) / n : 0.0;
  m.simulated_time = n / m.f_s;
  return m;
}

BitStream generate_bits(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t n_bits,
                        std::uint64_t seed, const BitGenOptions& opts) {
  if (n_bits == 0) throw DomainError("n_bits must be >= 1");
  BitSource src(p, calib, seed, opts);
  std::vector<std::uint8_t> bits(n_bits);
  src.fill(bits);
  BitStream bs = src.metadata();
  bs.bits = std::move(bits);
  return bs;
}

BitStream generate_bits_to(const PhysicalParams& p, const BalancePoint& calib, std::uint64_t n_bits,
                           std::uint64_t seed,
                           const std::function<void(std::span<const std::uint8_t>)>& sink,
                           const BitGenOptions& opts, std::size_t block) {
  if (n_bits == 0) throw DomainError("n_bits must be >= 1");
  BitSource src(p, calib, seed, opts);
  std::vector<std::uint8_t> buf(std::max<std::size_t>(block, 1));
  for (std::uint64_t left = n_bits; left > 0;) {
    const auto k = static_cast<std::size_t>(std::min<std::uint64_t>(left, buf.size()));
    src.fill(std::span(buf.data(), k));
    sink(std::span<const std::uint8_t>(buf.data(), k));
    left -= k;
  }
  return src.metadata();
}

std::vector<std::uint8_t> bits_from_samples(std::span<const double> a2_sq, double boundary,
                                            std::size_t every) {
  if (every == 0) throw DomainError("every must be >= 1");
  std::vector<std::uint8_t> out;
  out.reserve(a2_sq.size() / every);
  for (std::size_t i = every - 1; i < a2_sq.size(); i += every) out.push_back(a2_sq[i] > boundary);
  return out;
}

std::vector<std::uint8_t> bits_from_trajectory(const Trajectory& traj, double boundary,
                                               std::size_t every) {
  const std::vector<double> a2 = traj.intensities(1);
  return bits_from_samples(a2, boundary, every);
}

double bit_autocorrelation(std::span<const std::uint8_t> bits, std::size_t lag) {
  if (bits.size() <= lag + 1) throw DomainError("sequence too short for the requested lag");
  const double n = static_cast<double>(bits.size());
  const double mean = static_cast<double>(std::accumulate(bits.begin(), bits.end(), std::size_t{0})) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const double x = bits[i] - mean;
    den += x * x;
    if (i + lag < bits.size()) num += x * (bits[i + lag] - mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace brng
