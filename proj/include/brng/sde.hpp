#pragma once

// Stochastic integration of the coupled-mode equations with additive complex
// thermal noise on the phonon mode, <xi(t) xi*(t')> = 2 gamma_b nbar delta(t - t')
// (times an optional noise_scale).

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "brng/model.hpp"
#include "brng/rng.hpp"

namespace brng {

enum class Scheme { kEulerMaruyama, kStochasticHeun };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SimConfig {
  double dt = 1e-12;
  std::uint64_t n_steps = 0;
  std::uint64_t burn_in_steps = 0;
  std::uint64_t record_stride = 1;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kStochasticHeun;
  bool record_full_complex = false;
  double noise_scale = 1.0;
  /// Defaults to the non-generating fixed point.
  std::optional<ModeState> initial;
};

/// Throws DomainError on an invalid config, StepSizeViolation when
/// dt * fastest_rate > 0.1; returns warnings for 0.02 < ratio <= 0.1.
std::vector<std::string> check_config(const PhysicalParams& p, const SimConfig& cfg);

/// max(100 / gamma1, 20 * dwell_estimate) expressed in steps of dt.
std::uint64_t default_burn_in_steps(const PhysicalParams& p, double dt,
                                    std::optional<double> dwell_estimate = std::nullopt);

struct Trajectory {
  double t0 = 0.0;
  double dt_effective = 0.0;
  bool full_complex = false;
  /// Frame-major: 3 doubles (|a1|^2, |a2|^2, |b|^2) or 6 doubles
  /// (Re a1, Im a1, Re a2, Im a2, Re b, Im b) per sample.
  std::vector<double> data;
  std::string params_digest;
  std::vector<std::string> warnings;

  std::size_t frame_width() const { return full_complex ? 6 : 3; }
  std::size_t size() const { return data.size() / frame_width(); }
  std::span<const double> frame(std::size_t i) const {
    return {data.data() + i * frame_width(), frame_width()};
  }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt_effective; }
  /// Intensity of mode k (0 = a1, 1 = a2, 2 = b) at sample i.
  double intensity(std::size_t i, int mode) const;
  std::vector<double> intensities(int mode) const;
  ModeState state(std::size_t i) const;  ///< requires full_complex
};

/// sqrt(gamma_b nbar dt) (G1 + i G2) with independent standard normals.
cplx noise_increment(double gamma_b, double nbar, double dt, Engine& rng);

/// Steps the equations one dt at a time. Owns its engine; nothing global.
class ModeIntegrator {
 public:
  ModeIntegrator(const PhysicalParams& p, Scheme scheme, double dt, std::uint64_t seed,
                 double noise_scale, ModeState initial);

  /// Advance `steps` steps with internally drawn noise. Throws NonFiniteState.
  void advance(std::uint64_t steps);
  /// One step with a caller-supplied phonon noise increment.
  void step_with(cplx noise);

  const ModeState& state() const { return state_; }
  std::uint64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * dt_; }
  double dt() const { return dt_; }
  double noise_sigma() const { return sigma_; }

 private:
  template <Scheme S, bool Seeded>
  void run(std::uint64_t steps);
  template <Scheme S, bool Seeded>
  void single(cplx noise);
  cplx seed_phasor(std::uint64_t step) const;

  DriftCoefficients coeff_;
  Scheme scheme_;
  double dt_;
  double sigma_;
  bool seeded_;
  Engine engine_;
  NormalDistribution normal_{0.0, 1.0};
  ModeState state_;
  std::uint64_t step_ = 0;
};

using FrameSink = std::function<void(std::span<const double> frame)>;

/// Stream recorded frames to `sink`; returns the trajectory metadata with no data.
Trajectory integrate_stream(const PhysicalParams& p, const SimConfig& cfg, const FrameSink& sink);

Trajectory integrate(const PhysicalParams& p, const SimConfig& cfg);

struct ConvergenceReport {
  double dt = 0.0;
  double error_coarse = 0.0;  ///< |y(dt) - y(dt/2)| at the endpoint
  double error_fine = 0.0;    ///< |y(dt/2) - y(dt/4)|
  double observed_order = 0.0;
  bool saturated = false;     ///< fine error at round-off level; order not meaningful
};

/// Runs cfg.n_steps steps at dt, dt/2 and dt/4 on one Brownian path (coarse
/// increments are sums of fine ones) and compares endpoints.
ConvergenceReport convergence_probe(const PhysicalParams& p, const SimConfig& cfg);

}  // namespace brng
