#pragma once

// Physical parameter set of the two-optical-mode / one-phonon Brillouin laser,
// derived frequencies and the closed-form regime criteria of the hard
// excitation mode. All rates, detunings and drive amplitudes are angular
// (rad/s); intensities are in quanta.

#include <numbers>
#include <string>

namespace brng {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// One unit of the "value / 2pi in GHz" convention used by parameter files.
inline constexpr double kAngularGHz = kTwoPi * 1e9;
inline constexpr double kHbar = 1.054571817e-34;  // J s (CODATA 2018, exact in SI)
/// Tolerance on the delta_omega2 = delta_omega1 - omega_b consistency check.
inline constexpr double kDefaultConsistencyTol = 0.02 * kAngularGHz;

struct PhysicalParams {
  double gamma1 = 0.0;       ///< optical mode 1 relaxation rate
  double gamma2 = 0.0;       ///< optical mode 2 relaxation rate
  double gamma_b = 0.0;      ///< phonon relaxation rate
  double domega1 = 0.0;      ///< pump detuning from optical mode 1 (signed)
  double domega2 = 0.0;      ///< pump detuning from optical mode 2 (signed)
  double omega_b = 0.0;      ///< phonon frequency
  double g = 0.0;            ///< optomechanical coupling
  double nbar = 0.0;         ///< mean thermal phonon number
  double omega_pump1 = 0.0;  ///< pump drive amplitude
  double omega_pump2 = 0.0;  ///< seed drive amplitude

  bool operator==(const PhysicalParams&) const = default;
};

/// The parameter set quoted for the reference time traces. Both drive
/// amplitudes are left at zero; callers set the operating point.
PhysicalParams reference_params();

/// Throws DomainError if a rate, phonon frequency or n̄ is negative or non-finite.
void validate(const PhysicalParams& p);

/// |domega2 - (domega1 - omega_b)| <= tol.
bool detunings_consistent(const PhysicalParams& p, double tol = kDefaultConsistencyTol);

struct PumpPowerSpec {
  double kappa_ex = 0.0;  ///< input coupling rate (rad/s)
  double power = 0.0;     ///< W
  double omega = 0.0;     ///< optical carrier angular frequency (rad/s)
  double hbar = kHbar;
};

/// sqrt(kappa_ex * P / (hbar * omega)).
double pump_amplitude_from_power(const PumpPowerSpec& s);

struct DerivedRates {
  double delta_omega = 0.0;  ///< frequency of the generated phonons
  double Delta2 = 0.0;       ///< effective detuning of optical mode 2
  double Delta_b = 0.0;      ///< effective detuning of the phonon mode
  double Gamma = 0.0;        ///< gamma2 + gamma_b
  /// True when the delta_omega2 consistency check passed and the compact
  /// forms Delta2 = domega1 gamma2 / Gamma, Delta_b = domega1 gamma_b / Gamma hold.
  bool compact_forms_hold = false;
};

/// Uses the defining expressions, not the compact domega1-based forms.
DerivedRates derived_rates(const PhysicalParams& p, double consistency_tol = kDefaultConsistencyTol);

struct Thresholds {
  double omega_ex = 0.0;  ///< excitation amplitude (fold of the generating branch)
  double omega_th = 0.0;  ///< threshold amplitude (loss of stability of the off state)
  double j_b = 0.0;       ///< phonon intensity jump at the excitation amplitude
  /// Threshold expression with the extra 1/(gamma2 + gamma_b) factor, evaluated
  /// in the 2pi-GHz unit convention. Kept for traceability only; it is not
  /// dimensionally consistent and disagrees with the numerical threshold.
  double omega_th_printed = 0.0;
};

/// Closed-form thresholds. j_b may be negative when hard excitation fails.
Thresholds closed_form_thresholds(const PhysicalParams& p);

struct RegimeReport {
  bool hard_excitation = false;
  double hard_excitation_bound = 0.0;  ///< sqrt(gamma1 (gamma2 + gamma_b))
  double jump_visibility_bound = 0.0;  ///< sqrt(Gamma (g^2 nbar / gamma2 + gamma1))
  bool jump_visible = false;
  double criterion_ratio = 0.0;        ///< g^2 nbar / (gamma1 gamma2)
  bool criterion_satisfied = false;    ///< ratio within [0.1, 10]
  bool bistable_closed_form = false;   ///< omega_ex < omega_th
  std::string notes;
};

RegimeReport regime_report(const PhysicalParams& p);

struct BranchIntensities {
  double a2_sq = 0.0;
  double b_sq = 0.0;
};

/// Stationary generating solution with the seed off. Throws BelowExcitation
/// when |omega1| < omega_ex.
BranchIntensities generating_branch(const PhysicalParams& p, double omega1);

/// Fastest rate the integrator has to resolve: max(gamma_b, |domega1|, |Delta_b|, |Delta2|).
double fastest_rate(const PhysicalParams& p);

}  // namespace brng
