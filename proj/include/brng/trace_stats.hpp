#pragma once

// Statistical observables of |a2|^2 traces: histogram PDF/CDF, mode and
// boundary detection, occupancy probabilities and dwell-time statistics.

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "brng/sde.hpp"

namespace brng {

struct EmpiricalDistribution {
  std::vector<double> bin_edges;  ///< n_bins + 1 increasing edges
  std::vector<double> pdf;
  std::vector<double> cdf;        ///< value at the right edge of each bin
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;

  std::size_t n_bins() const { return pdf.size(); }
  double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
  double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
  /// Piecewise-linear CDF at x.
  double cdf_at(double x) const;
};

/// Histogram over [min, max] of the samples. Warns below 10 samples per bin.
/// A constant sample set yields a single occupied bin of unit width.
EmpiricalDistribution empirical_distribution(std::span<const double> samples,
                                             std::size_t n_bins = 200);

struct BimodalityOptions {
  std::size_t smoothing_bins = 5;
  double min_peak_fraction = 0.05;  ///< of the global maximum
  double max_dip_fraction = 0.80;   ///< of the lower of the two maxima
};

struct Bimodality {
  bool bimodal = false;
  std::vector<double> smoothed_pdf;
  /// Bin indices into the distribution (valid when bimodal).
  std::size_t lower_peak = 0, upper_peak = 0, dip = 0;
};

/// Picks, among all pairs of significant local maxima that are separated by
/// a deep enough minimum, the pair with the highest lower peak.
Bimodality detect_bimodality(const EmpiricalDistribution& d, const BimodalityOptions& opts = {});

enum class BoundaryStrategy { kPdfMinimum, kBalanceMedian };

std::string to_string(BoundaryStrategy s);
BoundaryStrategy boundary_strategy_from_string(const std::string& s);

struct ModeAnalysis {
  bool bimodal = false;
  /// Positions in |a2|^2 units (valid when bimodal).
  double lower_mode = 0.0, upper_mode = 0.0, pdf_minimum = 0.0;
  EmpiricalDistribution amplitude_distribution;  ///< histogram of |a2|
  Bimodality detail;
};

/// Modes of the |a2| amplitude histogram, reported back in |a2|^2 units.
/// The amplitude scale spreads the narrow off-state peak over more bins
/// than the intensity scale would.
ModeAnalysis analyze_modes(std::span<const double> a2_sq, std::size_t n_bins = 200,
                           const BimodalityOptions& opts = {});

/// pdf-minimum: argmin of the smoothed amplitude pdf between the two modes,
/// squared; throws NotBimodal. balance-median: the lower empirical median,
/// so exactly floor(n/2) samples lie strictly above it when values are distinct.
double find_boundary(std::span<const double> a2_sq, BoundaryStrategy strategy,
                     std::size_t n_bins = 200, const BimodalityOptions& opts = {});

struct Occupancy {
  double p_ng = 1.0;
  double p_g = 0.0;
};

/// p_g is the fraction strictly above the boundary.
Occupancy occupancy_probabilities(std::span<const double> a2_sq, double boundary);

struct DwellOptions {
  double hysteresis_fraction = 0.25;
  /// Distance between the two modes in |a2|^2; the Schmitt window is
  /// boundary -+ hysteresis_fraction * separation / 2. Defaults to the boundary.
  std::optional<double> mode_separation;
  std::size_t min_transitions = 20;
  /// Relative tolerance for declaring tau_ng and tau_g equal.
  double balance_tolerance = 0.15;
  std::size_t bootstrap_replicates = 1000;
  std::uint64_t bootstrap_seed = 0x5eedULL;
};

struct DwellStats {
  double tau_ng = 0.0;
  double tau_g = 0.0;
  double tau_ng_stderr = 0.0;
  double tau_g_stderr = 0.0;
  std::size_t n_transitions = 0;
  double half_life = 0.0;  ///< ln 2 * (tau_ng + tau_g) / 2
  double p_ng = 1.0;
  double p_g = 0.0;
  /// 95% half-width of p_g from a bootstrap over complete ng+g cycles.
  double p_g_halfwidth = 0.0;
  double boundary = 0.0;
  double hysteresis_fraction = 0.0;
  double threshold_low = 0.0;
  double threshold_high = 0.0;
  bool balanced = false;
  double balance_tolerance = 0.0;
  double sample_interval = 0.0;
  double observed_time = 0.0;
  std::vector<double> intervals_ng;  ///< complete dwell intervals (s)
  std::vector<double> intervals_g;

  double tau() const { return 0.5 * (tau_ng + tau_g); }
  /// T_1/2 of one state.
  double half_life_of(bool generating) const;
};

/// Schmitt-trigger state decoding. Intervals cut by either end of the trace
/// are left out of the means. Throws FewerThanMinTransitions.
DwellStats dwell_times(std::span<const double> a2_sq, double sample_interval, double boundary,
                       const DwellOptions& opts = {});
DwellStats dwell_times(const Trajectory& traj, double boundary, const DwellOptions& opts = {});

nlohmann::json to_json(const EmpiricalDistribution& d);
nlohmann::json to_json(const DwellStats& d, bool with_intervals = false);
void write_distribution_csv(const std::filesystem::path& path, const EmpiricalDistribution& d);
void write_intervals_csv(const std::filesystem::path& path, const DwellStats& d);

}  // namespace brng
