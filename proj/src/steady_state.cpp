#include "brng/steady_state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "brng/error.hpp"

namespace brng {
namespace {

// Holomorphic derivative c acting on z = x + iy, as a real 2x2 block.
void put_holomorphic(Jacobian6& j, int row, int col, cplx c) {
  j(row, col) += c.real();
  j(row, col + 1) += -c.imag();
  j(row + 1, col) += c.imag();
  j(row + 1, col + 1) += c.real();
}

// Derivative with respect to conj(z): f = d * conj(z).
void put_antiholomorphic(Jacobian6& j, int row, int col, cplx d) {
  j(row, col) += d.real();
  j(row, col + 1) += d.imag();
  j(row + 1, col) += d.imag();
  j(row + 1, col + 1) += -d.real();
}

double max_real_part(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().real().maxCoeff();
}

struct EffectiveFrame {
  double rotation;
  double Delta2;
  double Delta_b;
};

EffectiveFrame effective_frame(const PhysicalParams& p) {
  const DerivedRates d = derived_rates(p);
  EffectiveFrame f;
  f.rotation = (p.gamma_b * d.Delta2 - p.gamma2 * d.Delta_b) / d.Gamma;
  f.Delta2 = d.Delta2 - f.rotation;
  f.Delta_b = d.Delta_b + f.rotation;
  return f;
}

// Positive roots X = |a2|^2 of the generating-branch quadratic, ascending.
std::vector<double> generating_roots(const PhysicalParams& p, const EffectiveFrame& f,
                                     double omega1) {
  const double g2 = p.g * p.g;
  const double a1_sq = (p.gamma2 * p.gamma_b + f.Delta2 * f.Delta_b) / g2;
  if (!(a1_sq > 0.0)) return {};
  const double c = g2 / (p.gamma_b * p.gamma_b + f.Delta_b * f.Delta_b);
  const double qa = c * g2;
  const double qb = 2.0 * c * (p.gamma1 * p.gamma_b - p.domega1 * f.Delta_b);
  const double qc = p.gamma1 * p.gamma1 + p.domega1 * p.domega1 - omega1 * omega1 / a1_sq;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return {};
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  std::vector<double> roots;
  if (q != 0.0) {
    roots.push_back(q / qa);
    roots.push_back(qc / q);
  } else {
    roots.push_back(0.0);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  std::erase_if(roots, [](double x) { return !(x > 0.0); });
  return roots;
}

}  // namespace

Jacobian6 drift_jacobian(const PhysicalParams& p, const ModeState& s, double rotation) {
  const DriftCoefficients c = DriftCoefficients::from(p, rotation);
  Jacobian6 j = Jacobian6::Zero();
  // a1 row
  put_holomorphic(j, 0, 0, c.c1);
  put_holomorphic(j, 0, 2, c.minus_ig * s.b);
  put_holomorphic(j, 0, 4, c.minus_ig * s.a2);
  // a2 row
  put_holomorphic(j, 2, 2, c.c2);
  put_holomorphic(j, 2, 0, c.minus_ig * std::conj(s.b));
  put_antiholomorphic(j, 2, 4, c.minus_ig * s.a1);
  // b row
  put_holomorphic(j, 4, 4, c.cb);
  put_holomorphic(j, 4, 0, c.minus_ig * std::conj(s.a2));
  put_antiholomorphic(j, 4, 2, c.minus_ig * s.a1);
  return j;
}

double scaled_residual(const PhysicalParams& p, const ModeState& s, double rotation) {
  const DriftCoefficients c = DriftCoefficients::from(p, rotation);
  const ModeState f = drift(c, s, cplx(0.0, 0.0));
  const double norm = std::sqrt(std::norm(f.a1) + std::norm(f.a2) + std::norm(f.b));
  const double r1 = std::abs(s.a1), r2 = std::abs(s.a2), rb = std::abs(s.b);
  const double rate = std::max({p.gamma1, p.gamma2, p.gamma_b, std::abs(p.domega1),
                                std::abs(c.c2.imag()), std::abs(c.cb.imag())});
  const double scale = std::abs(p.omega_pump1) + rate * (r1 + r2 + rb) +
                       std::abs(p.g) * (r1 * r2 + r2 * rb + r1 * rb);
  return scale > 0.0 ? norm / scale : norm;
}

std::vector<FixedPoint> steady_states_numeric(const PhysicalParams& p_in, double omega1,
                                              double fp_tol) {
  if (p_in.omega_pump2 != 0.0) {
    throw DomainError("steady states exist only with the seed wave off (omega_pump2 = 0)");
  }
  validate(p_in);
  PhysicalParams p = p_in;
  p.omega_pump1 = omega1;

  std::vector<FixedPoint> out;
  {
    FixedPoint fp;
    fp.state = non_generating_state(p);
    fp.residual = scaled_residual(p, fp.state);
    fp.converged = fp.residual <= fp_tol;
    fp.leading_eigenvalue_real_part = max_real_part(drift_jacobian(p, fp.state));
    fp.stable = fp.leading_eigenvalue_real_part < 0.0;
    out.push_back(fp);
  }
  if (p.g == 0.0 || omega1 == 0.0) return out;

  const EffectiveFrame frame = effective_frame(p);
  const double c = p.g * p.g / (p.gamma_b * p.gamma_b + frame.Delta_b * frame.Delta_b);
  for (double x : generating_roots(p, frame, omega1)) {
    FixedPoint fp;
    fp.generating = true;
    fp.rotation = frame.rotation;
    const cplx denom(p.gamma1 + c * x * p.gamma_b, p.domega1 - c * x * frame.Delta_b);
    fp.state.a1 = cplx(0.0, -omega1) / denom;
    fp.state.a2 = cplx(std::sqrt(x), 0.0);
    fp.state.b = cplx(0.0, -p.g) * fp.state.a1 * std::sqrt(x) / cplx(p.gamma_b, frame.Delta_b);
    fp.residual = scaled_residual(p, fp.state, frame.rotation);
    fp.converged = fp.residual <= fp_tol;

    // Remove the neutral direction of the phase symmetry a2 -> a2 e^{i phi}, b -> b e^{-i phi}.
    const Jacobian6 jac = drift_jacobian(p, fp.state, frame.rotation);
    Eigen::Matrix<double, 6, 1> v;
    v << 0.0, 0.0, -fp.state.a2.imag(), fp.state.a2.real(), fp.state.b.imag(), -fp.state.b.real();
    Eigen::HouseholderQR<Eigen::Matrix<double, 6, 1>> qr(v);
    const Jacobian6 q = qr.householderQ();
    const Jacobian6 rotated = q.transpose() * jac * q;
    fp.leading_eigenvalue_real_part = max_real_part(rotated.bottomRightCorner<5, 5>());
    fp.stable = fp.leading_eigenvalue_real_part < 0.0;
    out.push_back(fp);
  }
  return out;
}

std::optional<double> separatrix_intensity(const PhysicalParams& p, double omega1) {
  if (p.g == 0.0) return std::nullopt;
  const auto roots = generating_roots(p, effective_frame(p), omega1);
  if (roots.size() != 2) return std::nullopt;
  return roots.front();
}

std::optional<BistableWindow> bistable_window_numeric(const PhysicalParams& p_in,
                                                      const WindowScanOptions& opts) {
  PhysicalParams p = p_in;
  p.omega_pump1 = 0.0;
  p.omega_pump2 = 0.0;
  if (p.g == 0.0) throw DomainError("bistability analysis requires g != 0");
  auto off_stable = [&](double w) { return steady_states_numeric(p, w).front().stable; };
  auto on_stable = [&](double w) {
    const auto pts = steady_states_numeric(p, w);
    return std::any_of(pts.begin() + 1, pts.end(), [](const FixedPoint& f) { return f.stable; });
  };
  // Bisection for the first pump at which `flag` equals `target`, given
  // flag(lo) != target and flag(hi) == target.
  auto bisect = [&](auto&& flag, double lo, double hi, bool target) {
    for (int i = 0; i < opts.bisection_steps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (flag(mid) == target ? hi : lo) = mid;
    }
    return hi;
  };

  const Thresholds cf = closed_form_thresholds(p);
  double range = 2.0 * std::max(cf.omega_ex, cf.omega_th);
  if (!(range > 0.0)) range = p.gamma1 + p.gamma2 + p.gamma_b + std::abs(p.domega1);

  std::optional<double> hi;
  for (int attempt = 0; attempt <= opts.max_range_doublings && !hi; ++attempt, range *= 2.0) {
    double prev = 0.0;
    for (int k = 1; k <= opts.scan_points; ++k) {
      const double w = range * k / opts.scan_points;
      if (!off_stable(w)) {
        hi = bisect(off_stable, prev, w, false);
        break;
      }
      prev = w;
    }
  }
  if (!hi) {
    std::ostringstream os;
    os << "non-generating state stays stable up to omega1 = " << range / 2.0;
    throw ScanBudgetExhausted(os.str());
  }

  std::optional<double> lo;
  const double upper = std::max(range, 2.0 * *hi);
  double prev = 0.0;
  for (int k = 1; k <= opts.scan_points; ++k) {
    const double w = upper * k / opts.scan_points;
    if (on_stable(w)) {
      lo = bisect(on_stable, prev, w, true);
      break;
    }
    prev = w;
  }
  if (!lo) return std::nullopt;
  if (!(*lo < *hi * (1.0 - 1e-9))) return std::nullopt;
  return BistableWindow{*lo, *hi};
}

}  // namespace brng
