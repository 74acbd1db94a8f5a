#pragma once

// Deterministic right-hand side of the coupled-mode equations
//   da1/dt = (-gamma1 - i domega1) a1 - i g a2 b - i Omega1
//   da2/dt = (-gamma2 - i Delta2) a2 - i g a1 b* - i Omega2 exp(-i Delta2 t)
//   db/dt  = (-gamma_b - i Delta_b) b - i g a1 a2*            (+ thermal noise)

#include <complex>

#include "brng/params.hpp"

namespace brng {

using cplx = std::complex<double>;

struct ModeState {
  cplx a1{};
  cplx a2{};
  cplx b{};

  bool operator==(const ModeState&) const = default;
};

struct DriftCoefficients {
  cplx c1;         ///< -(gamma1 + i domega1)
  cplx c2;         ///< -(gamma2 + i Delta2)
  cplx cb;         ///< -(gamma_b + i Delta_b)
  cplx minus_ig;   ///< -i g
  cplx pump1;      ///< -i Omega1
  cplx pump2;      ///< -i Omega2 (multiplied by the seed phasor)
  double seed_rate;  ///< Delta2, angular rate of the seed phasor

  /// `rotation` shifts the mode-2 / phonon detunings into a frame co-rotating
  /// with a generating solution: Delta2 -> Delta2 - rotation, Delta_b -> Delta_b + rotation.
  static DriftCoefficients from(const PhysicalParams& p, double rotation = 0.0) {
    const DerivedRates d = derived_rates(p);
    DriftCoefficients c;
    c.c1 = cplx(-p.gamma1, -p.domega1);
    c.c2 = cplx(-p.gamma2, -(d.Delta2 - rotation));
    c.cb = cplx(-p.gamma_b, -(d.Delta_b + rotation));
    c.minus_ig = cplx(0.0, -p.g);
    c.pump1 = cplx(0.0, -p.omega_pump1);
    c.pump2 = cplx(0.0, -p.omega_pump2);
    c.seed_rate = d.Delta2;
    return c;
  }
};

inline ModeState drift(const DriftCoefficients& c, const ModeState& s, cplx seed_phasor) {
  ModeState f;
  f.a1 = c.c1 * s.a1 + c.minus_ig * (s.a2 * s.b) + c.pump1;
  f.a2 = c.c2 * s.a2 + c.minus_ig * (s.a1 * std::conj(s.b)) + c.pump2 * seed_phasor;
  f.b = c.cb * s.b + c.minus_ig * (s.a1 * std::conj(s.a2));
  return f;
}

/// Non-generating fixed point of the seed-free equations: a1 = -i Omega1 / (gamma1 + i domega1).
inline ModeState non_generating_state(const PhysicalParams& p) {
  ModeState s;
  s.a1 = cplx(0.0, -p.omega_pump1) / cplx(p.gamma1, p.domega1);
  return s;
}

}  // namespace brng
