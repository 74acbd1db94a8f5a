#pragma once

// Numerical steady states and linear stability of the seed-free
// deterministic equations, plus the bistability window they imply.

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "brng/model.hpp"

namespace brng {

struct FixedPoint {
  ModeState state;
  bool generating = false;
  bool stable = false;
  /// Largest real part over the Jacobian spectrum, excluding the neutral
  /// phase mode of generating solutions.
  double leading_eigenvalue_real_part = 0.0;
  /// Angular rate at which a2 (and, oppositely, b) rotate in the lab frame of
  /// the equations; zero whenever the detunings are consistent.
  double rotation = 0.0;
  /// Drift norm at the point, scaled by the natural magnitude of the terms.
  double residual = 0.0;
  bool converged = false;
};

using Jacobian6 = Eigen::Matrix<double, 6, 6>;

/// Real 6x6 Jacobian of the drift in the (Re a1, Im a1, Re a2, Im a2, Re b, Im b) basis.
Jacobian6 drift_jacobian(const PhysicalParams& p, const ModeState& s, double rotation = 0.0);

/// Scaled drift residual used for the fp_tol test.
double scaled_residual(const PhysicalParams& p, const ModeState& s, double rotation = 0.0);

/// All stationary solutions at pump amplitude omega1 (seed must be off):
/// the non-generating point first, then generating roots by increasing |a2|^2.
std::vector<FixedPoint> steady_states_numeric(const PhysicalParams& p, double omega1,
                                              double fp_tol = 1e-9);

struct BistableWindow {
  double omega_lo = 0.0;  ///< smallest pump with a stable generating point
  double omega_hi = 0.0;  ///< largest pump with a stable non-generating point
};

struct WindowScanOptions {
  int scan_points = 400;
  int bisection_steps = 60;
  int max_range_doublings = 8;
};

/// Throws ScanBudgetExhausted when no loss of stability of the off state is
/// found within the scan range.
std::optional<BistableWindow> bistable_window_numeric(const PhysicalParams& p,
                                                      const WindowScanOptions& opts = {});

/// |a2|^2 of the unstable (saddle) generating point at omega1, i.e. the
/// deterministic separatrix between the two basins. Empty outside the window.
std::optional<double> separatrix_intensity(const PhysicalParams& p, double omega1);

}  // namespace brng
