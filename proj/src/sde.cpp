#include "brng/sde.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "brng/config_io.hpp"
#include "brng/error.hpp"
#include "brng/log.hpp"

namespace brng {

std::string to_string(Scheme s) {
  return s == Scheme::kEulerMaruyama ? "euler-maruyama" : "stochastic-heun";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "euler-maruyama") return Scheme::kEulerMaruyama;
  if (s == "stochastic-heun") return Scheme::kStochasticHeun;
  throw ConfigError("unknown scheme '" + s + "' (expected euler-maruyama or stochastic-heun)");
}

std::vector<std::string> check_config(const PhysicalParams& p, const SimConfig& cfg) {
  validate(p);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw DomainError("dt must be > 0");
  if (cfg.record_stride < 1) throw DomainError("record_stride must be >= 1");
  if (cfg.n_steps > 0 && cfg.burn_in_steps >= cfg.n_steps) {
    throw DomainError("burn_in_steps must be < n_steps");
  }
  if (!(cfg.noise_scale >= 0.0)) throw DomainError("noise_scale must be >= 0");
  std::vector<std::string> warnings;
  const double ratio = cfg.dt * fastest_rate(p);
  std::ostringstream os;
  os << "dt * fastest_rate = " << ratio;
  if (ratio > 0.1) throw StepSizeViolation(os.str() + " exceeds the hard limit 0.1");
  if (ratio > 0.05) {
    warnings.push_back(os.str() + " exceeds the resolution requirement 0.05");
  } else if (ratio > 0.02) {
    warnings.push_back(os.str() + " above the recommended 0.02");
  }
  return warnings;
}

std::uint64_t default_burn_in_steps(const PhysicalParams& p, double dt,
                                    std::optional<double> dwell_estimate) {
  double t = p.gamma1 > 0.0 ? 100.0 / p.gamma1 : 0.0;
  if (dwell_estimate) t = std::max(t, 20.0 * *dwell_estimate);
  return static_cast<std::uint64_t>(std::ceil(t / dt));
}

double Trajectory::intensity(std::size_t i, int mode) const {
  const auto f = frame(i);
  if (!full_complex) return f[mode];
  return f[2 * mode] * f[2 * mode] + f[2 * mode + 1] * f[2 * mode + 1];
}

std::vector<double> Trajectory::intensities(int mode) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = intensity(i, mode);
  return out;
}

ModeState Trajectory::state(std::size_t i) const {
  if (!full_complex) throw DomainError("trajectory does not store complex amplitudes");
  const auto f = frame(i);
  return ModeState{cplx(f[0], f[1]), cplx(f[2], f[3]), cplx(f[4], f[5])};
}

cplx noise_increment(double gamma_b, double nbar, double dt, Engine& rng) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  const double sigma = std::sqrt(gamma_b * nbar * dt);
  if (sigma == 0.0) return {0.0, 0.0};
  NormalDistribution normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {sigma * re, sigma * im};
}

ModeIntegrator::ModeIntegrator(const PhysicalParams& p, Scheme scheme, double dt,
                               std::uint64_t seed, double noise_scale, ModeState initial)
    : coeff_(DriftCoefficients::from(p)),
      scheme_(scheme),
      dt_(dt),
      sigma_(std::sqrt(p.gamma_b * p.nbar * dt * noise_scale)),
      seeded_(p.omega_pump2 != 0.0),
      engine_(make_engine(seed)),
      state_(initial) {}

cplx ModeIntegrator::seed_phasor(std::uint64_t step) const {
  return std::polar(1.0, -coeff_.seed_rate * static_cast<double>(step) * dt_);
}

namespace {

// drift() from model.hpp written out in real arithmetic; -i g and the pump
// terms are purely imaginary, which the generic complex product cannot exploit.
struct RealDrift {
  double c1r, c1i, c2r, c2i, cbr, cbi, g, pump1, pump2;

  explicit RealDrift(const DriftCoefficients& c)
      : c1r(c.c1.real()), c1i(c.c1.imag()), c2r(c.c2.real()), c2i(c.c2.imag()),
        cbr(c.cb.real()), cbi(c.cb.imag()), g(-c.minus_ig.imag()), pump1(-c.pump1.imag()),
        pump2(-c.pump2.imag()) {}

  template <bool Seeded>
  void operator()(const double* y, double* f, double ph_r, double ph_i) const {
    const double a1r = y[0], a1i = y[1], a2r = y[2], a2i = y[3], br = y[4], bi = y[5];
    // a2 * b, a1 * conj(b), a1 * conj(a2)
    const double p_r = a2r * br - a2i * bi, p_i = a2r * bi + a2i * br;
    const double q_r = a1r * br + a1i * bi, q_i = a1i * br - a1r * bi;
    const double s_r = a1r * a2r + a1i * a2i, s_i = a1i * a2r - a1r * a2i;
    // -i g z = g (Im z, -Re z); -i Omega = (0, -Omega)
    f[0] = c1r * a1r - c1i * a1i + g * p_i;
    f[1] = c1r * a1i + c1i * a1r - g * p_r - pump1;
    f[2] = c2r * a2r - c2i * a2i + g * q_i;
    f[3] = c2r * a2i + c2i * a2r - g * q_r;
    f[4] = cbr * br - cbi * bi + g * s_i;
    f[5] = cbr * bi + cbi * br - g * s_r;
    if constexpr (Seeded) {
      // -i Omega2 (ph_r + i ph_i) = Omega2 (ph_i, -ph_r)
      f[2] += pump2 * ph_i;
      f[3] -= pump2 * ph_r;
    }
  }
};

}  // namespace

template <Scheme S, bool Seeded>
void ModeIntegrator::single(cplx noise) {
  const RealDrift rhs(coeff_);
  double y[6] = {state_.a1.real(), state_.a1.imag(), state_.a2.real(),
                 state_.a2.imag(), state_.b.real(),  state_.b.imag()};
  double f0[6], next[6];
  cplx ph0(1.0, 0.0), ph1(1.0, 0.0);
  if constexpr (Seeded) ph0 = seed_phasor(step_);
  rhs.template operator()<Seeded>(y, f0, ph0.real(), ph0.imag());
  const double nr = noise.real(), ni = noise.imag();
  if constexpr (S == Scheme::kEulerMaruyama) {
    for (int k = 0; k < 6; ++k) next[k] = y[k] + dt_ * f0[k];
    next[4] += nr;
    next[5] += ni;
  } else {
    double pred[6], f1[6];
    for (int k = 0; k < 6; ++k) pred[k] = y[k] + dt_ * f0[k];
    pred[4] += nr;
    pred[5] += ni;
    if constexpr (Seeded) ph1 = seed_phasor(step_ + 1);
    rhs.template operator()<Seeded>(pred, f1, ph1.real(), ph1.imag());
    const double h = 0.5 * dt_;
    for (int k = 0; k < 6; ++k) next[k] = y[k] + h * (f0[k] + f1[k]);
    next[4] += nr;
    next[5] += ni;
  }
  const double probe = next[0] + next[1] + next[2] + next[3] + next[4] + next[5];
  if (!std::isfinite(probe)) {
    std::ostringstream os;
    os << "non-finite state at step " << step_ + 1;
    throw NonFiniteState(os.str(), step_ + 1);
  }
  state_ = ModeState{cplx(next[0], next[1]), cplx(next[2], next[3]), cplx(next[4], next[5])};
  ++step_;
}

template <Scheme S, bool Seeded>
void ModeIntegrator::run(std::uint64_t steps) {
  if (sigma_ == 0.0) {
    for (std::uint64_t k = 0; k < steps; ++k) single<S, Seeded>(cplx(0.0, 0.0));
    return;
  }
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    single<S, Seeded>(cplx(sigma_ * re, sigma_ * im));
  }
}

void ModeIntegrator::advance(std::uint64_t steps) {
  if (scheme_ == Scheme::kEulerMaruyama) {
    seeded_ ? run<Scheme::kEulerMaruyama, true>(steps) : run<Scheme::kEulerMaruyama, false>(steps);
  } else {
    seeded_ ? run<Scheme::kStochasticHeun, true>(steps)
            : run<Scheme::kStochasticHeun, false>(steps);
  }
}

void ModeIntegrator::step_with(cplx noise) {
  if (scheme_ == Scheme::kEulerMaruyama) {
    seeded_ ? single<Scheme::kEulerMaruyama, true>(noise)
            : single<Scheme::kEulerMaruyama, false>(noise);
  } else {
    seeded_ ? single<Scheme::kStochasticHeun, true>(noise)
            : single<Scheme::kStochasticHeun, false>(noise);
  }
}

Trajectory integrate_stream(const PhysicalParams& p, const SimConfig& cfg, const FrameSink& sink) {
  Trajectory traj;
  traj.warnings = check_config(p, cfg);
  for (const auto& w : traj.warnings) warn(w);
  traj.full_complex = cfg.record_full_complex;
  traj.dt_effective = cfg.dt * static_cast<double>(cfg.record_stride);
  traj.t0 = cfg.dt * static_cast<double>(cfg.burn_in_steps + cfg.record_stride);
  traj.params_digest = params_digest(p, cfg);

  ModeIntegrator integrator(p, cfg.scheme, cfg.dt, cfg.seed, cfg.noise_scale,
                            cfg.initial.value_or(non_generating_state(p)));
  integrator.advance(cfg.burn_in_steps);
  const std::uint64_t n_frames = (cfg.n_steps - cfg.burn_in_steps) / cfg.record_stride;
  double frame[6];
  for (std::uint64_t i = 0; i < n_frames; ++i) {
    integrator.advance(cfg.record_stride);
    const ModeState& s = integrator.state();
    if (cfg.record_full_complex) {
      frame[0] = s.a1.real();
      frame[1] = s.a1.imag();
      frame[2] = s.a2.real();
      frame[3] = s.a2.imag();
      frame[4] = s.b.real();
      frame[5] = s.b.imag();
      sink(std::span<const double>(frame, 6));
    } else {
      frame[0] = std::norm(s.a1);
      frame[1] = std::norm(s.a2);
      frame[2] = std::norm(s.b);
      sink(std::span<const double>(frame, 3));
    }
  }
  return traj;
}

Trajectory integrate(const PhysicalParams& p, const SimConfig& cfg) {
  std::vector<double> data;
  if (cfg.n_steps > cfg.burn_in_steps && cfg.record_stride > 0) {
    data.reserve((cfg.n_steps - cfg.burn_in_steps) / cfg.record_stride *
                 (cfg.record_full_complex ? 6 : 3));
  }
  Trajectory traj = integrate_stream(
      p, cfg, [&](std::span<const double> f) { data.insert(data.end(), f.begin(), f.end()); });
  traj.data = std::move(data);
  return traj;
}

ConvergenceReport convergence_probe(const PhysicalParams& p, const SimConfig& cfg) {
  check_config(p, cfg);
  const ModeState start = cfg.initial.value_or(non_generating_state(p));
  ModeIntegrator coarse(p, cfg.scheme, cfg.dt, 0, 0.0, start);
  ModeIntegrator half(p, cfg.scheme, cfg.dt / 2, 0, 0.0, start);
  ModeIntegrator quarter(p, cfg.scheme, cfg.dt / 4, 0, 0.0, start);
  Engine engine = make_engine(cfg.seed);
  NormalDistribution normal(0.0, 1.0);
  const double sigma = std::sqrt(p.gamma_b * p.nbar * cfg.dt / 4 * cfg.noise_scale);
  for (std::uint64_t k = 0; k < cfg.n_steps; ++k) {
    cplx fine[4];
    for (auto& w : fine) {
      if (sigma == 0.0) {
        w = {0.0, 0.0};
      } else {
        const double re = normal(engine);
        const double im = normal(engine);
        w = {sigma * re, sigma * im};
      }
    }
    for (const auto& w : fine) quarter.step_with(w);
    half.step_with(fine[0] + fine[1]);
    half.step_with(fine[2] + fine[3]);
    coarse.step_with(fine[0] + fine[1] + fine[2] + fine[3]);
  }
  auto distance = [](const ModeState& x, const ModeState& y) {
    return std::sqrt(std::norm(x.a1 - y.a1) + std::norm(x.a2 - y.a2) + std::norm(x.b - y.b));
  };
  const ModeState& yq = quarter.state();
  ConvergenceReport r;
  r.dt = cfg.dt;
  r.error_coarse = distance(coarse.state(), half.state());
  r.error_fine = distance(half.state(), yq);
  const double magnitude = std::sqrt(std::norm(yq.a1) + std::norm(yq.a2) + std::norm(yq.b));
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(magnitude, 1e-300) *
                       std::sqrt(static_cast<double>(std::max<std::uint64_t>(cfg.n_steps, 1)));
  r.saturated = r.error_fine <= floor;
  r.observed_order = (r.error_fine > 0.0 && r.error_coarse > 0.0)
                         ? std::log2(r.error_coarse / r.error_fine)
                         : 0.0;
  return r;
}

}  // namespace brng
