#pragma once

// Operating-point calibration: measures occupancy and lifetimes at given
// drive amplitudes, finds the balanced pump by stochastic bisection and maps
// both over an (omega1, omega2) grid.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "brng/params.hpp"
#include "brng/sde.hpp"
#include "brng/trace_stats.hpp"

namespace brng {

enum class Discriminator {
  kPdfMinimum,  ///< minimum of the trace's |a2| pdf, saddle when not bimodal
  kSaddle,      ///< |a2|^2 of the seed-free saddle point
};

struct EvaluationOptions {
  double dt = 1e-12;
  Scheme scheme = Scheme::kStochasticHeun;
  double noise_scale = 1.0;
  std::uint64_t record_stride = 100;
  /// The trace is extended chunk by chunk until this many transitions.
  std::size_t target_transitions = 200;
  double chunk_time = 2e-5;     ///< s, first chunk
  double max_sim_time = 1e-4;   ///< s, hard budget per evaluation
  std::optional<double> burn_in_time;  ///< default: default_burn_in_steps
  Discriminator discriminator = Discriminator::kPdfMinimum;
  DwellOptions dwell;
  bool keep_trace = false;
};

struct OperatingPoint {
  double omega1 = 0.0;
  double omega2 = 0.0;
  std::uint64_t seed = 0;
  bool valid = false;
  std::string note;
  double boundary = 0.0;  ///< discriminator boundary used for p_g and dwell times
  std::string boundary_source;
  double mode_separation = 0.0;
  double simulated_time = 0.0;
  Occupancy occupancy;
  std::optional<DwellStats> dwell;  ///< absent when too few transitions
  std::vector<double> a2_trace;     ///< filled when keep_trace
};

/// Throws only for configuration errors; statistical shortfalls leave the
/// point invalid with a note.
OperatingPoint evaluate_operating_point(const PhysicalParams& p, double omega1, double omega2,
                                        std::uint64_t seed, const EvaluationOptions& opts = {});

// ---- stochastic bisection -------------------------------------------------

struct ProbabilityEstimate {
  double p = 0.0;
  double halfwidth = 1.0;
};

struct BisectionOptions {
  double target = 0.5;
  double tol_p = 0.03;
  int max_evaluations = 12;
};

struct BisectionStep {
  double x = 0.0;
  ProbabilityEstimate estimate;
};

struct BisectionResult {
  double x = 0.0;
  ProbabilityEstimate estimate;
  bool converged = false;  ///< false: budget exhausted, best iterate returned
  std::vector<BisectionStep> history;
};

/// Safeguarded false-position search for estimate(x).p == target on an
/// increasing function. Stops once |p - target| <= tol_p and the confidence
/// interval covers the target. Throws BracketInvalid when the end points do
/// not straddle the target.
BisectionResult stochastic_bisection(const std::function<ProbabilityEstimate(double)>& estimate,
                                     double lo, double hi, const BisectionOptions& opts = {});

// ---- balance point --------------------------------------------------------

struct BalancePoint {
  double omega1_star = 0.0;
  double omega2 = 0.0;
  double p_g_at_star = 0.0;
  double p_g_halfwidth = 0.0;
  double tolerance = 0.0;
  double tau = 0.0;
  double tau_stderr = 0.0;
  double tau_ng = 0.0;
  double tau_g = 0.0;
  double half_life = 0.0;
  double boundary = 0.0;               ///< balance median of the final trace
  double discriminator_boundary = 0.0;
  std::size_t n_transitions = 0;
  bool converged = false;
  bool lifetimes_equal = false;        ///< |tau_ng - tau_g| within the dwell balance tolerance
  std::uint64_t seed = 0;
  std::vector<BisectionStep> history;
  std::string note;

  /// Dwell statistics in the form bitgen expects.
  DwellStats as_dwell() const;
};

struct BalanceOptions {
  BisectionOptions bisection;
  EvaluationOptions evaluation;
};

/// Bracket defaults to the numerical bistable window when omitted.
BalancePoint balance_pump(const PhysicalParams& p, double omega2,
                          std::optional<std::pair<double, double>> bracket, std::uint64_t seed,
                          const BalanceOptions& opts = {});

/// Trace length giving an occupancy standard deviation of about target_sd
/// for telegraph switching with mean dwell bp.tau (Var p ~ tau / 4T),
/// clamped to [min_time, max_time].
double refine_time_for(const BalancePoint& bp, double target_sd = 0.004, double min_time = 2e-5,
                       double max_time = 2e-3);

/// Median of a fresh long trace at the balance point; replaces bp.boundary.
double refine_boundary(const PhysicalParams& p, const BalancePoint& bp, double sim_time,
                       std::uint64_t seed, const EvaluationOptions& opts = {});

// ---- maps -----------------------------------------------------------------

struct GridSpec {
  std::vector<double> omega1;  ///< rad/s, increasing
  std::vector<double> omega2;  ///< rad/s, increasing, >= 0

  /// n evenly spaced points on [lo, hi] (inclusive).
  static std::vector<double> linspace(double lo, double hi, std::size_t n);
};

struct CalibrationMap {
  std::vector<double> omega1_grid;
  std::vector<double> omega2_grid;
  // Row-major over (omega2, omega1): index = i2 * omega1_grid.size() + i1.
  std::vector<double> p_ng, p_g, p_g_halfwidth, tau_ng, tau_g, tau_ng_stderr, tau_g_stderr,
      boundary, simulated_time;
  std::vector<std::size_t> per_cell_transitions;
  std::vector<std::uint8_t> valid;
  std::vector<std::string> notes;
  std::uint64_t master_seed = 0;
  std::size_t min_transitions = 0;

  std::size_t index(std::size_t i1, std::size_t i2) const { return i2 * omega1_grid.size() + i1; }
  std::size_t cells() const { return omega1_grid.size() * omega2_grid.size(); }
};

/// Each cell runs its own trace seeded with substream(master_seed, cell index);
/// the result does not depend on the thread count.
CalibrationMap sweep_maps(const PhysicalParams& p, const GridSpec& grid, std::uint64_t master_seed,
                          const EvaluationOptions& opts = {}, unsigned threads = 1,
                          const std::function<void(std::size_t done, std::size_t total)>& progress = {});

struct LocusResult {
  std::vector<BalancePoint> points;  ///< ordered by omega2
  std::vector<std::string> notes;    ///< skipped columns
};

/// Per omega2 row, the interpolated 0.5 crossing of p_g in omega1 and the
/// lifetime there (log-linear in sqrt(tau_ng * tau_g)).
LocusResult balance_locus(const CalibrationMap& map);

nlohmann::json to_json(const OperatingPoint& op);
nlohmann::json to_json(const BalancePoint& bp);
/// Inverse of to_json(BalancePoint); throws ConfigError on missing fields.
BalancePoint balance_point_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CalibrationMap& map);
nlohmann::json to_json(const LocusResult& locus);
void write_map_csv(const std::filesystem::path& path, const CalibrationMap& map);
void write_locus_csv(const std::filesystem::path& path, const LocusResult& locus);

}  // namespace brng
