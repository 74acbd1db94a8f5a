#include "brng/trace_stats.hpp"

#include <algorithm>
#include <boost/random/uniform_int_distribution.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>

#include "brng/error.hpp"
#include "brng/log.hpp"
#include "brng/rng.hpp"

namespace brng {

double EmpiricalDistribution::cdf_at(double x) const {
  if (pdf.empty() || x <= bin_edges.front()) return 0.0;
  if (x >= bin_edges.back()) return 1.0;
  const double w = bin_width();
  const auto i = std::min(n_bins() - 1, static_cast<std::size_t>((x - bin_edges.front()) / w));
  const double before = i == 0 ? 0.0 : cdf[i - 1];
  return before + (cdf[i] - before) * (x - bin_edges[i]) / w;
}

EmpiricalDistribution empirical_distribution(std::span<const double> samples, std::size_t n_bins) {
  if (samples.empty()) throw DomainError("empirical_distribution: no samples");
  if (n_bins == 0) throw DomainError("empirical_distribution: n_bins must be positive");
  EmpiricalDistribution d;
  d.n_samples = samples.size();
  if (samples.size() < 10 * n_bins) {
    d.warnings.push_back("fewer than 10 samples per bin (" + std::to_string(samples.size()) +
                         " samples, " + std::to_string(n_bins) + " bins)");
    warn(d.warnings.back());
  }
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  double lo = *mn, hi = *mx;
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("empirical_distribution: non-finite sample");
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double w = (hi - lo) / static_cast<double>(n_bins);
  d.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) d.bin_edges[i] = lo + w * static_cast<double>(i);
  d.bin_edges.back() = hi;

  std::vector<std::uint64_t> counts(n_bins, 0);
  for (double x : samples) {
    auto i = static_cast<std::size_t>((x - lo) / w);
    ++counts[std::min(i, n_bins - 1)];
  }
  const double n = static_cast<double>(samples.size());
  d.pdf.resize(n_bins);
  d.cdf.resize(n_bins);
  std::uint64_t running = 0;
  for (std::size_t i = 0; i < n_bins; ++i) {
    d.pdf[i] = static_cast<double>(counts[i]) / (n * w);
    running += counts[i];
    d.cdf[i] = static_cast<double>(running) / n;
  }
  return d;
}

Bimodality detect_bimodality(const EmpiricalDistribution& d, const BimodalityOptions& opts) {
  Bimodality b;
  const std::size_t n = d.pdf.size();
  const std::size_t half = opts.smoothing_bins / 2;
  b.smoothed_pdf.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i >= half ? i - half : 0;
    const std::size_t e = std::min(n - 1, i + half);
    double s = 0.0;
    for (std::size_t k = a; k <= e; ++k) s += d.pdf[k];
    b.smoothed_pdf[i] = s / static_cast<double>(e - a + 1);
  }
  const auto& s = b.smoothed_pdf;
  if (n < 3) return b;
  const double top = *std::max_element(s.begin(), s.end());

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const bool rises = i == 0 || s[i] > s[i - 1];
    const bool holds = i + 1 == n || s[i] >= s[i + 1];
    if (rises && holds && s[i] >= opts.min_peak_fraction * top) peaks.push_back(i);
  }

  double best_low = -1.0, best_sum = -1.0;
  for (std::size_t x = 0; x < peaks.size(); ++x) {
    for (std::size_t y = x + 1; y < peaks.size(); ++y) {
      const std::size_t i = peaks[x], j = peaks[y];
      const auto dip = static_cast<std::size_t>(
          std::min_element(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(j) + 1) - s.begin());
      const double lower = std::min(s[i], s[j]);
      if (s[dip] > opts.max_dip_fraction * lower) continue;
      const double sum = s[i] + s[j];
      if (lower > best_low || (lower == best_low && sum > best_sum)) {
        best_low = lower;
        best_sum = sum;
        b.bimodal = true;
        b.lower_peak = i;
        b.upper_peak = j;
        b.dip = dip;
      }
    }
  }
  return b;
}

std::string to_string(BoundaryStrategy s) {
  return s == BoundaryStrategy::kPdfMinimum ? "pdf-minimum" : "balance-median";
}

BoundaryStrategy boundary_strategy_from_string(const std::string& s) {
  if (s == "pdf-minimum") return BoundaryStrategy::kPdfMinimum;
  if (s == "balance-median") return BoundaryStrategy::kBalanceMedian;
  throw ConfigError("unknown boundary strategy '" + s + "' (pdf-minimum | balance-median)");
}

ModeAnalysis analyze_modes(std::span<const double> a2_sq, std::size_t n_bins,
                           const BimodalityOptions& opts) {
  std::vector<double> amp(a2_sq.size());
  std::transform(a2_sq.begin(), a2_sq.end(), amp.begin(),
                 [](double x) { return std::sqrt(std::max(x, 0.0)); });
  ModeAnalysis m;
  m.amplitude_distribution = empirical_distribution(amp, n_bins);
  m.detail = detect_bimodality(m.amplitude_distribution, opts);
  m.bimodal = m.detail.bimodal;
  if (m.bimodal) {
    const auto& d = m.amplitude_distribution;
    auto sq = [](double x) { return x * x; };
    m.lower_mode = sq(d.bin_center(m.detail.lower_peak));
    m.upper_mode = sq(d.bin_center(m.detail.upper_peak));
    m.pdf_minimum = sq(d.bin_center(m.detail.dip));
  }
  return m;
}

double find_boundary(std::span<const double> a2_sq, BoundaryStrategy strategy, std::size_t n_bins,
                     const BimodalityOptions& opts) {
  if (a2_sq.empty()) throw DomainError("find_boundary: no samples");
  if (strategy == BoundaryStrategy::kBalanceMedian) {
    std::vector<double> v(a2_sq.begin(), a2_sq.end());
    const std::size_t k = (v.size() + 1) / 2 - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
  }
  const ModeAnalysis m = analyze_modes(a2_sq, n_bins, opts);
  if (!m.bimodal) throw NotBimodal("no two separated modes in the |a2| distribution");
  return m.pdf_minimum;
}

Occupancy occupancy_probabilities(std::span<const double> a2_sq, double boundary) {
  if (std::isnan(boundary)) throw DomainError("occupancy_probabilities: boundary is NaN");
  if (a2_sq.empty()) return {};
  const auto above = std::count_if(a2_sq.begin(), a2_sq.end(), [&](double x) { return x > boundary; });
  Occupancy o;
  o.p_g = static_cast<double>(above) / static_cast<double>(a2_sq.size());
  o.p_ng = 1.0 - o.p_g;
  return o;
}

double DwellStats::half_life_of(bool generating) const {
  return std::numbers::ln2 * (generating ? tau_g : tau_ng);
}

namespace {

void mean_and_stderr(const std::vector<double>& v, double& mean, double& se) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

DwellStats dwell_times(std::span<const double> a2_sq, double sample_interval, double boundary,
                       const DwellOptions& opts) {
  if (!std::isfinite(boundary)) throw DomainError("dwell_times: boundary must be finite");
  if (!(opts.hysteresis_fraction >= 0.0 && opts.hysteresis_fraction < 0.5))
    throw DomainError("dwell_times: hysteresis_fraction must lie in [0, 0.5)");
  if (!(sample_interval > 0.0)) throw DomainError("dwell_times: sample interval must be positive");

  DwellStats d;
  d.boundary = boundary;
  d.hysteresis_fraction = opts.hysteresis_fraction;
  d.balance_tolerance = opts.balance_tolerance;
  d.sample_interval = sample_interval;
  d.observed_time = sample_interval * static_cast<double>(a2_sq.size());
  const double sep = std::abs(opts.mode_separation.value_or(boundary));
  const double half = 0.5 * opts.hysteresis_fraction * sep;
  d.threshold_low = boundary - half;
  d.threshold_high = boundary + half;
  const Occupancy occ = occupancy_probabilities(a2_sq, boundary);
  d.p_ng = occ.p_ng;
  d.p_g = occ.p_g;

  // Index at which each state began; the first entry starts a truncated interval.
  std::vector<std::size_t> starts;
  int state = -1;
  int first_state = -1;
  for (std::size_t i = 0; i < a2_sq.size(); ++i) {
    const double x = a2_sq[i];
    int next = state;
    if (x > d.threshold_high) next = 1;
    else if (x <= d.threshold_low) next = 0;
    if (next != state) {
      if (state == -1) first_state = next;
      starts.push_back(i);
      state = next;
    }
  }
  d.n_transitions = starts.empty() ? 0 : starts.size() - 1;
  if (d.n_transitions < opts.min_transitions) {
    throw FewerThanMinTransitions("only " + std::to_string(d.n_transitions) +
                                      " transitions (need " + std::to_string(opts.min_transitions) + ")",
                                  d.n_transitions);
  }

  // Complete interval k spans [starts[k], starts[k+1]) for k >= 1.
  struct Cycle {
    std::size_t begin, end;
  };
  std::vector<Cycle> cycles;
  for (std::size_t k = 1; k + 1 < starts.size(); ++k) {
    const int s = (first_state + static_cast<int>(k)) % 2;
    const double len = sample_interval * static_cast<double>(starts[k + 1] - starts[k]);
    (s == 1 ? d.intervals_g : d.intervals_ng).push_back(len);
    if (s == 0 && k + 2 < starts.size()) cycles.push_back({starts[k], starts[k + 2]});
  }
  if (d.intervals_g.empty() || d.intervals_ng.empty())
    throw FewerThanMinTransitions("no complete dwell interval in one of the states", d.n_transitions);
  mean_and_stderr(d.intervals_ng, d.tau_ng, d.tau_ng_stderr);
  mean_and_stderr(d.intervals_g, d.tau_g, d.tau_g_stderr);
  d.half_life = std::numbers::ln2 * d.tau();
  d.balanced = std::abs(d.tau_ng - d.tau_g) <= opts.balance_tolerance * d.tau();

  // Block bootstrap of the occupancy over ng+g cycles.
  d.p_g_halfwidth = 1.0;
  if (cycles.size() >= 2 && opts.bootstrap_replicates >= 2) {
    std::vector<double> above(cycles.size()), total(cycles.size());
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const auto seg = a2_sq.subspan(cycles[c].begin, cycles[c].end - cycles[c].begin);
      above[c] = static_cast<double>(
          std::count_if(seg.begin(), seg.end(), [&](double x) { return x > boundary; }));
      total[c] = static_cast<double>(seg.size());
    }
    Engine rng = make_engine(opts.bootstrap_seed);
    boost::random::uniform_int_distribution<std::size_t> pick(0, cycles.size() - 1);
    double m = 0.0, m2 = 0.0;
    for (std::size_t r = 0; r < opts.bootstrap_replicates; ++r) {
      double a = 0.0, t = 0.0;
      for (std::size_t c = 0; c < cycles.size(); ++c) {
        const std::size_t j = pick(rng);
        a += above[j];
        t += total[j];
      }
      const double v = a / t;
      m += v;
      m2 += v * v;
    }
    const double nr = static_cast<double>(opts.bootstrap_replicates);
    m /= nr;
    const double var = std::max(0.0, m2 / nr - m * m) * nr / (nr - 1.0);
    d.p_g_halfwidth = 1.96 * std::sqrt(var);
  }
  return d;
}

DwellStats dwell_times(const Trajectory& traj, double boundary, const DwellOptions& opts) {
  const std::vector<double> a2 = traj.intensities(1);
  return dwell_times(a2, traj.dt_effective, boundary, opts);
}

nlohmann::json to_json(const EmpiricalDistribution& d) {
  return {{"n_samples", d.n_samples}, {"bin_edges", d.bin_edges}, {"pdf", d.pdf},
          {"cdf", d.cdf},             {"warnings", d.warnings}};
}

nlohmann::json to_json(const DwellStats& d, bool with_intervals) {
  nlohmann::json j = {{"tau_ng", d.tau_ng},
                      {"tau_g", d.tau_g},
                      {"tau_ng_stderr", d.tau_ng_stderr},
                      {"tau_g_stderr", d.tau_g_stderr},
                      {"n_transitions", d.n_transitions},
                      {"half_life", d.half_life},
                      {"p_ng", d.p_ng},
                      {"p_g", d.p_g},
                      {"p_g_halfwidth", d.p_g_halfwidth},
                      {"boundary", d.boundary},
                      {"hysteresis_fraction", d.hysteresis_fraction},
                      {"threshold_low", d.threshold_low},
                      {"threshold_high", d.threshold_high},
                      {"balanced", d.balanced},
                      {"balance_tolerance", d.balance_tolerance},
                      {"sample_interval", d.sample_interval},
                      {"observed_time", d.observed_time}};
  if (with_intervals) {
    j["intervals_ng"] = d.intervals_ng;
    j["intervals_g"] = d.intervals_g;
  }
  return j;
}

void write_distribution_csv(const std::filesystem::path& path, const EmpiricalDistribution& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "bin_lo,bin_hi,pdf,cdf\n" << std::setprecision(17);
  for (std::size_t i = 0; i < d.n_bins(); ++i)
    out << d.bin_edges[i] << ',' << d.bin_edges[i + 1] << ',' << d.pdf[i] << ',' << d.cdf[i] << '\n';
}

void write_intervals_csv(const std::filesystem::path& path, const DwellStats& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "state,duration_s\n" << std::setprecision(17);
  for (double x : d.intervals_ng) out << "ng," << x << '\n';
  for (double x : d.intervals_g) out << "g," << x << '\n';
}

}  // namespace brng
