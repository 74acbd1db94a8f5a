#include "brng/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "brng/error.hpp"

namespace brng {

PhysicalParams reference_params() {
  PhysicalParams p;
  p.gamma1 = 0.191 * kAngularGHz;
  p.gamma2 = 0.191 * kAngularGHz;
  p.gamma_b = 1.2 * kAngularGHz;
  p.domega1 = 1.58 * kAngularGHz;
  p.domega2 = -10.59 * kAngularGHz;
  p.omega_b = 12.17 * kAngularGHz;
  p.g = 0.0159 * kAngularGHz;
  p.nbar = 513.0;
  return p;
}

void validate(const PhysicalParams& p) {
  auto check = [](double v, const char* name, bool non_negative) {
    if (!std::isfinite(v)) throw DomainError(std::string(name) + " is not finite");
    if (non_negative && v < 0.0) throw DomainError(std::string(name) + " must be >= 0");
  };
  check(p.gamma1, "gamma1", true);
  check(p.gamma2, "gamma2", true);
  check(p.gamma_b, "gamma_b", true);
  check(p.omega_b, "omega_b", true);
  check(p.nbar, "nbar", true);
  check(p.domega1, "domega1", false);
  check(p.domega2, "domega2", false);
  check(p.g, "g", false);
  check(p.omega_pump1, "omega_pump1", false);
  check(p.omega_pump2, "omega_pump2", false);
}

bool detunings_consistent(const PhysicalParams& p, double tol) {
  return std::abs(p.domega2 - (p.domega1 - p.omega_b)) <= tol;
}

double pump_amplitude_from_power(const PumpPowerSpec& s) {
  if (!(s.kappa_ex > 0.0)) throw DomainError("kappa_ex must be > 0");
  if (!(s.omega > 0.0)) throw DomainError("omega must be > 0");
  if (!(s.hbar > 0.0)) throw DomainError("hbar must be > 0");
  if (!(s.power >= 0.0)) throw DomainError("power must be >= 0");
  return std::sqrt(s.kappa_ex * s.power / (s.hbar * s.omega));
}

DerivedRates derived_rates(const PhysicalParams& p, double consistency_tol) {
  DerivedRates r;
  r.Gamma = p.gamma2 + p.gamma_b;
  if (!(r.Gamma > 0.0)) throw DomainError("gamma2 + gamma_b must be > 0");
  r.delta_omega = (p.omega_b * p.gamma2 - p.domega2 * p.gamma_b) / r.Gamma;
  r.Delta2 = p.domega2 + r.delta_omega;
  r.Delta_b = p.omega_b - r.delta_omega;
  r.compact_forms_hold = detunings_consistent(p, consistency_tol);
  return r;
}

Thresholds closed_form_thresholds(const PhysicalParams& p) {
  if (p.g == 0.0) throw DomainError("threshold analysis requires g != 0");
  const double Gamma = p.gamma2 + p.gamma_b;
  if (!(Gamma > 0.0)) throw DomainError("gamma2 + gamma_b must be > 0");
  const double abs_g = std::abs(p.g);
  const double prefactor = std::sqrt(p.gamma_b * p.gamma2) / abs_g;
  const double dw = p.domega1;

  Thresholds t;
  t.omega_ex = prefactor * std::abs(dw * (1.0 + p.gamma1 / Gamma));
  t.omega_th = prefactor * std::sqrt((p.gamma1 * p.gamma1 + dw * dw) *
                                     (1.0 + (dw / Gamma) * (dw / Gamma)));
  t.j_b = p.gamma2 / (abs_g * abs_g) * (dw * dw / Gamma - p.gamma1);
  t.omega_th_printed = t.omega_th * kAngularGHz / Gamma;
  return t;
}

RegimeReport regime_report(const PhysicalParams& p) {
  RegimeReport r;
  const double Gamma = p.gamma2 + p.gamma_b;
  const double abs_dw = std::abs(p.domega1);
  r.hard_excitation_bound = std::sqrt(p.gamma1 * Gamma);
  r.hard_excitation = abs_dw > r.hard_excitation_bound;
  const double g2 = p.g * p.g;
  r.jump_visibility_bound =
      p.gamma2 > 0.0 ? std::sqrt(Gamma * (g2 / p.gamma2 * p.nbar + p.gamma1)) : 0.0;
  r.jump_visible = abs_dw < r.jump_visibility_bound;
  const double denom = p.gamma1 * p.gamma2;
  r.criterion_ratio = denom > 0.0 ? g2 * p.nbar / denom : 0.0;
  r.criterion_satisfied = r.criterion_ratio >= 0.1 && r.criterion_ratio <= 10.0;

  std::ostringstream notes;
  if (p.g != 0.0 && Gamma > 0.0) {
    const Thresholds t = closed_form_thresholds(p);
    r.bistable_closed_form = r.hard_excitation && t.omega_ex < t.omega_th;
  } else {
    notes << "g = 0: no generation analysis. ";
  }
  if (!detunings_consistent(p)) {
    notes << "domega2 differs from domega1 - omega_b by more than the consistency tolerance; "
             "compact detuning forms do not apply. ";
  }
  if (!r.hard_excitation) notes << "soft excitation: no bistability expected. ";
  if (r.hard_excitation && !r.jump_visible) {
    notes << "jump larger than thermal noise: spontaneous switching suppressed. ";
  }
  r.notes = notes.str();
  if (!r.notes.empty() && r.notes.back() == ' ') r.notes.pop_back();
  return r;
}

BranchIntensities generating_branch(const PhysicalParams& p, double omega1) {
  const Thresholds t = closed_form_thresholds(p);
  const double radicand = omega1 * omega1 - t.omega_ex * t.omega_ex;
  if (radicand < 0.0) {
    std::ostringstream os;
    os << "|omega1| = " << std::abs(omega1) << " below excitation amplitude " << t.omega_ex;
    throw BelowExcitation(os.str());
  }
  const DerivedRates d = derived_rates(p);
  const double abs_g = std::abs(p.g);
  const double root = std::sqrt(radicand) / abs_g;
  const double offset = (p.domega1 * d.Delta2 - p.gamma1 * p.gamma2) / (abs_g * abs_g);
  BranchIntensities out;
  out.a2_sq = std::sqrt(p.gamma_b / p.gamma2) * root + p.gamma_b / p.gamma2 * offset;
  out.b_sq = std::sqrt(p.gamma2 / p.gamma_b) * root + offset;
  return out;
}

double fastest_rate(const PhysicalParams& p) {
  const DerivedRates d = derived_rates(p);
  return std::max({p.gamma_b, std::abs(p.domega1), std::abs(d.Delta_b), std::abs(d.Delta2)});
}

}  // namespace brng
