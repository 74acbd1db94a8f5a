#include "brng/calibrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <thread>

#include "brng/error.hpp"
#include "brng/rng.hpp"
#include "brng/steady_state.hpp"

namespace brng {
namespace {

struct SaddleGuess {
  double boundary = 0.0;
  double separation = 0.0;
};

// Seed-free saddle at omega1 clamped into the bistable window.
std::optional<SaddleGuess> saddle_guess(const PhysicalParams& p, double omega1) {
  PhysicalParams q = p;
  q.omega_pump1 = 0.0;
  q.omega_pump2 = 0.0;
  const auto w = bistable_window_numeric(q);
  if (!w) return std::nullopt;
  const double margin = 1e-6 * (w->omega_hi - w->omega_lo);
  const double x = std::clamp(omega1, w->omega_lo + margin, w->omega_hi - margin);
  const auto s = separatrix_intensity(q, x);
  if (!s) return std::nullopt;
  SaddleGuess g;
  g.boundary = *s;
  for (const auto& fp : steady_states_numeric(q, x))
    if (fp.generating && fp.stable) g.separation = std::norm(fp.state.a2);
  if (g.separation <= 0.0) g.separation = g.boundary;
  return g;
}

}  // namespace

OperatingPoint evaluate_operating_point(const PhysicalParams& p, double omega1, double omega2,
                                        std::uint64_t seed, const EvaluationOptions& opts) {
  if (opts.record_stride == 0) throw DomainError("record_stride must be >= 1");
  if (!(opts.chunk_time > 0.0) || !(opts.max_sim_time > 0.0))
    throw DomainError("chunk_time and max_sim_time must be positive");
  PhysicalParams q = p;
  q.omega_pump1 = omega1;
  q.omega_pump2 = omega2;
  validate(q);

  const std::uint64_t burn = opts.burn_in_time
                                 ? static_cast<std::uint64_t>(std::ceil(*opts.burn_in_time / opts.dt))
                                 : default_burn_in_steps(q, opts.dt);
  SimConfig probe;
  probe.dt = opts.dt;
  probe.burn_in_steps = burn;
  probe.n_steps = burn + 1;
  probe.record_stride = opts.record_stride;
  check_config(q, probe);

  OperatingPoint op;
  op.omega1 = omega1;
  op.omega2 = omega2;
  op.seed = seed;

  std::optional<SaddleGuess> saddle;
  bool saddle_tried = false;
  auto fallback = [&]() -> const std::optional<SaddleGuess>& {
    if (!saddle_tried) {
      saddle = saddle_guess(q, omega1);
      saddle_tried = true;
    }
    return saddle;
  };

  ModeIntegrator integ(q, opts.scheme, opts.dt, seed, opts.noise_scale, non_generating_state(q));
  integ.advance(burn);
  const double sample_dt = opts.dt * static_cast<double>(opts.record_stride);
  std::vector<double> a2;
  double chunk = std::min(opts.chunk_time, opts.max_sim_time);
  double elapsed = 0.0;
  for (;;) {
    const auto frames = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(chunk / sample_dt));
    a2.reserve(a2.size() + frames);
    for (std::uint64_t i = 0; i < frames; ++i) {
      integ.advance(opts.record_stride);
      a2.push_back(std::norm(integ.state().a2));
    }
    elapsed = sample_dt * static_cast<double>(a2.size());

    bool have_boundary = false;
    if (opts.discriminator == Discriminator::kPdfMinimum) {
      const ModeAnalysis m = analyze_modes(a2);
      if (m.bimodal) {
        op.boundary = m.pdf_minimum;
        op.mode_separation = m.upper_mode - m.lower_mode;
        op.boundary_source = "pdf-minimum";
        have_boundary = true;
      }
    }
    if (!have_boundary) {
      if (const auto& s = fallback()) {
        op.boundary = s->boundary;
        op.mode_separation = s->separation;
        op.boundary_source = "saddle";
        have_boundary = true;
      }
    }
    if (!have_boundary) {
      op.occupancy = {};
      op.dwell.reset();
      op.note = "no bimodal trace and no saddle point at this pump";
      break;
    }

    op.occupancy = occupancy_probabilities(a2, op.boundary);
    DwellOptions dopts = opts.dwell;
    dopts.mode_separation = op.mode_separation;
    std::size_t transitions = 0;
    try {
      op.dwell = dwell_times(a2, sample_dt, op.boundary, dopts);
      transitions = op.dwell->n_transitions;
      op.note.clear();
    } catch (const FewerThanMinTransitions& e) {
      op.dwell.reset();
      transitions = e.found();
      op.note = e.what();
    }
    if (transitions >= opts.target_transitions || elapsed >= opts.max_sim_time * (1 - 1e-12)) break;
    const double rate = static_cast<double>(transitions) / elapsed;
    double want = transitions > 0
                      ? 1.1 * static_cast<double>(opts.target_transitions) / rate - elapsed
                      : elapsed;
    want = std::max(want, 0.1 * opts.chunk_time);
    chunk = std::min(want, opts.max_sim_time - elapsed);
    if (chunk < sample_dt) break;
  }
  op.simulated_time = elapsed;
  op.valid = op.dwell.has_value();
  if (op.valid && op.dwell->n_transitions < opts.target_transitions) {
    op.note = "time budget reached at " + std::to_string(op.dwell->n_transitions) + " transitions";
  }
  if (opts.keep_trace) op.a2_trace = std::move(a2);
  return op;
}

BisectionResult stochastic_bisection(const std::function<ProbabilityEstimate(double)>& estimate,
                                     double lo, double hi, const BisectionOptions& opts) {
  if (!(lo < hi)) throw BracketInvalid("bracket must satisfy lo < hi");
  if (opts.max_evaluations < 3) throw DomainError("bisection needs at least three evaluations");
  BisectionResult r;
  auto eval = [&](double x) {
    const ProbabilityEstimate e = estimate(x);
    r.history.push_back({x, e});
    return e;
  };
  auto good = [&](const ProbabilityEstimate& e) {
    const double off = std::abs(e.p - opts.target);
    return off <= opts.tol_p && off <= e.halfwidth;
  };
  ProbabilityEstimate elo = eval(lo);
  ProbabilityEstimate ehi = eval(hi);
  if (!(elo.p < opts.target && ehi.p > opts.target)) {
    throw BracketInvalid("bracket does not straddle p = " + std::to_string(opts.target) +
                         " (p(lo) = " + std::to_string(elo.p) + ", p(hi) = " +
                         std::to_string(ehi.p) + ")");
  }
  int evaluations = 2;
  while (evaluations < opts.max_evaluations) {
    const double w = hi - lo;
    double x = lo + (opts.target - elo.p) / (ehi.p - elo.p) * w;
    x = std::clamp(x, lo + 0.1 * w, hi - 0.1 * w);
    const ProbabilityEstimate e = eval(x);
    ++evaluations;
    if (good(e)) {
      r.x = x;
      r.estimate = e;
      r.converged = true;
      return r;
    }
    if (e.p < opts.target) {
      lo = x;
      elo = e;
    } else {
      hi = x;
      ehi = e;
    }
  }
  const auto best = std::min_element(r.history.begin(), r.history.end(), [&](const auto& a, const auto& b) {
    return std::abs(a.estimate.p - opts.target) < std::abs(b.estimate.p - opts.target);
  });
  r.x = best->x;
  r.estimate = best->estimate;
  r.converged = false;
  return r;
}

DwellStats BalancePoint::as_dwell() const {
  DwellStats d;
  d.tau_ng = tau_ng;
  d.tau_g = tau_g;
  d.n_transitions = n_transitions;
  d.half_life = half_life;
  d.p_g = p_g_at_star;
  d.p_ng = 1.0 - p_g_at_star;
  d.p_g_halfwidth = p_g_halfwidth;
  d.boundary = boundary;
  d.balance_tolerance = 0.15;
  d.balanced = lifetimes_equal;
  return d;
}

BalancePoint balance_pump(const PhysicalParams& p, double omega2,
                          std::optional<std::pair<double, double>> bracket, std::uint64_t seed,
                          const BalanceOptions& opts) {
  PhysicalParams q = p;
  q.omega_pump2 = omega2;
  if (!bracket) {
    const auto w = bistable_window_numeric(q);
    if (!w) throw BracketInvalid("no bistable window for these parameters");
    const double m = 0.02 * (w->omega_hi - w->omega_lo);
    bracket = {w->omega_lo + m, w->omega_hi - m};
  }
  EvaluationOptions eopts = opts.evaluation;
  eopts.keep_trace = true;
  std::vector<OperatingPoint> points;
  std::uint64_t k = 0;
  auto estimate = [&](double omega1) {
    points.push_back(evaluate_operating_point(q, omega1, omega2, substream(seed, k++), eopts));
    const OperatingPoint& op = points.back();
    ProbabilityEstimate e;
    e.p = op.occupancy.p_g;
    e.halfwidth = op.dwell ? op.dwell->p_g_halfwidth : 1.0;
    // Only the latest trace is needed beyond this point.
    if (points.size() > 1) std::vector<double>().swap(points[points.size() - 2].a2_trace);
    return e;
  };
  const BisectionResult r = stochastic_bisection(estimate, bracket->first, bracket->second,
                                                 opts.bisection);

  BalancePoint bp;
  bp.omega1_star = r.x;
  bp.omega2 = omega2;
  bp.p_g_at_star = r.estimate.p;
  bp.p_g_halfwidth = r.estimate.halfwidth;
  bp.tolerance = opts.bisection.tol_p;
  bp.converged = r.converged;
  bp.seed = seed;
  bp.history = r.history;

  // Re-evaluate the chosen point if its trace was released.
  auto it = std::find_if(points.rbegin(), points.rend(), [&](const auto& op) { return op.omega1 == r.x; });
  std::size_t idx = static_cast<std::size_t>(points.rend() - it) - 1;
  if (points[idx].a2_trace.empty()) {
    points[idx] = evaluate_operating_point(q, r.x, omega2, substream(seed, idx), eopts);
  }
  const OperatingPoint& op = points[idx];
  bp.discriminator_boundary = op.boundary;
  bp.boundary = find_boundary(op.a2_trace, BoundaryStrategy::kBalanceMedian);

  DwellOptions dopts = eopts.dwell;
  dopts.mode_separation = op.mode_separation;
  try {
    const DwellStats d = dwell_times(op.a2_trace, eopts.dt * static_cast<double>(eopts.record_stride),
                                     bp.boundary, dopts);
    bp.tau_ng = d.tau_ng;
    bp.tau_g = d.tau_g;
    bp.n_transitions = d.n_transitions;
    const double rel = 0.5 * std::hypot(d.tau_ng_stderr / d.tau_ng, d.tau_g_stderr / d.tau_g);
    bp.tau = std::sqrt(d.tau_ng * d.tau_g);
    bp.tau_stderr = rel * bp.tau;
    bp.lifetimes_equal = d.balanced;
  } catch (const FewerThanMinTransitions& e) {
    bp.note = std::string("dwell statistics unavailable at the median boundary: ") + e.what();
  }
  bp.half_life = std::numbers::ln2 * bp.tau;
  if (!bp.converged) {
    if (!bp.note.empty()) bp.note += "; ";
    bp.note += "evaluation budget exhausted, best iterate returned";
  }
  return bp;
}

double refine_time_for(const BalancePoint& bp, double target_sd, double min_time, double max_time) {
  if (!(target_sd > 0.0) || !(min_time > 0.0) || max_time < min_time)
    throw DomainError("refine_time_for: need target_sd > 0 and 0 < min_time <= max_time");
  if (!(bp.tau > 0.0) || !std::isfinite(bp.tau)) return max_time;
  return std::clamp(bp.tau / (4.0 * target_sd * target_sd), min_time, max_time);
}

double refine_boundary(const PhysicalParams& p, const BalancePoint& bp, double sim_time,
                       std::uint64_t seed, const EvaluationOptions& opts) {
  EvaluationOptions e = opts;
  e.chunk_time = sim_time;
  e.max_sim_time = sim_time;
  e.target_transitions = std::numeric_limits<std::size_t>::max();
  e.keep_trace = true;
  const OperatingPoint op = evaluate_operating_point(p, bp.omega1_star, bp.omega2, seed, e);
  return find_boundary(op.a2_trace, BoundaryStrategy::kBalanceMedian);
}

std::vector<double> GridSpec::linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

CalibrationMap sweep_maps(const PhysicalParams& p, const GridSpec& grid, std::uint64_t master_seed,
                          const EvaluationOptions& opts, unsigned threads,
                          const std::function<void(std::size_t, std::size_t)>& progress) {
  if (!std::is_sorted(grid.omega1.begin(), grid.omega1.end()) ||
      !std::is_sorted(grid.omega2.begin(), grid.omega2.end()))
    throw DomainError("grid axes must be increasing");
  if (!grid.omega2.empty() && grid.omega2.front() < 0.0) throw DomainError("omega2 must be >= 0");

  CalibrationMap m;
  m.omega1_grid = grid.omega1;
  m.omega2_grid = grid.omega2;
  m.master_seed = master_seed;
  m.min_transitions = opts.dwell.min_transitions;
  const std::size_t n = m.cells();
  for (auto* v : {&m.p_ng, &m.p_g, &m.p_g_halfwidth, &m.tau_ng, &m.tau_g, &m.tau_ng_stderr,
                  &m.tau_g_stderr, &m.boundary, &m.simulated_time})
    v->assign(n, std::nan(""));
  m.per_cell_transitions.assign(n, 0);
  m.valid.assign(n, 0);
  m.notes.assign(n, "");
  if (n == 0) return m;

  // Fail fast on a bad step size rather than per cell.
  {
    PhysicalParams q = p;
    q.omega_pump1 = grid.omega1.back();
    q.omega_pump2 = grid.omega2.back();
    SimConfig c;
    c.dt = opts.dt;
    c.n_steps = 1;
    c.record_stride = opts.record_stride;
    check_config(q, c);
  }

  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < n;) {
      const std::size_t i1 = c % m.omega1_grid.size();
      const std::size_t i2 = c / m.omega1_grid.size();
      try {
        const OperatingPoint op = evaluate_operating_point(p, m.omega1_grid[i1], m.omega2_grid[i2],
                                                           substream(master_seed, c), opts);
        m.p_g[c] = op.occupancy.p_g;
        m.p_ng[c] = op.occupancy.p_ng;
        m.boundary[c] = op.boundary;
        m.simulated_time[c] = op.simulated_time;
        m.notes[c] = op.note;
        if (op.dwell) {
          m.p_g_halfwidth[c] = op.dwell->p_g_halfwidth;
          m.tau_ng[c] = op.dwell->tau_ng;
          m.tau_g[c] = op.dwell->tau_g;
          m.tau_ng_stderr[c] = op.dwell->tau_ng_stderr;
          m.tau_g_stderr[c] = op.dwell->tau_g_stderr;
          m.per_cell_transitions[c] = op.dwell->n_transitions;
          m.valid[c] = 1;
        }
      } catch (const Error& e) {
        m.notes[c] = e.what();
      }
      const std::size_t k = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(k, n);
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return m;
}

LocusResult balance_locus(const CalibrationMap& map) {
  LocusResult out;
  const std::size_t n1 = map.omega1_grid.size();
  for (std::size_t i2 = 0; i2 < map.omega2_grid.size(); ++i2) {
    std::vector<std::size_t> cells;
    for (std::size_t i1 = 0; i1 < n1; ++i1)
      if (map.valid[map.index(i1, i2)]) cells.push_back(i1);
    std::vector<std::size_t> crossings;
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
      const double a = map.p_g[map.index(cells[k], i2)];
      const double b = map.p_g[map.index(cells[k + 1], i2)];
      if (a < 0.5 && b >= 0.5) crossings.push_back(k);
    }
    if (crossings.empty()) {
      out.notes.push_back("omega2 = " + std::to_string(map.omega2_grid[i2]) +
                          ": no bracket of p_g = 0.5 among valid cells");
      continue;
    }
    const std::size_t k = crossings[crossings.size() / 2];
    const std::size_t ia = map.index(cells[k], i2), ib = map.index(cells[k + 1], i2);
    const double pa = map.p_g[ia], pb = map.p_g[ib];
    const double f = (0.5 - pa) / (pb - pa);
    auto lerp = [&](double x, double y) { return x + f * (y - x); };
    auto loglerp = [&](double x, double y) { return std::exp(lerp(std::log(x), std::log(y))); };

    BalancePoint bp;
    bp.omega2 = map.omega2_grid[i2];
    bp.omega1_star = lerp(map.omega1_grid[cells[k]], map.omega1_grid[cells[k + 1]]);
    bp.p_g_at_star = 0.5;
    bp.p_g_halfwidth = lerp(map.p_g_halfwidth[ia], map.p_g_halfwidth[ib]);
    bp.tolerance = bp.p_g_halfwidth;
    bp.tau_ng = loglerp(map.tau_ng[ia], map.tau_ng[ib]);
    bp.tau_g = loglerp(map.tau_g[ia], map.tau_g[ib]);
    bp.tau = std::sqrt(bp.tau_ng * bp.tau_g);
    auto rel = [&](std::size_t c) {
      return 0.5 * std::hypot(map.tau_ng_stderr[c] / map.tau_ng[c], map.tau_g_stderr[c] / map.tau_g[c]);
    };
    bp.tau_stderr = lerp(rel(ia), rel(ib)) * bp.tau;
    bp.half_life = std::numbers::ln2 * bp.tau;
    bp.boundary = lerp(map.boundary[ia], map.boundary[ib]);
    bp.discriminator_boundary = bp.boundary;
    bp.n_transitions = lerp(static_cast<double>(map.per_cell_transitions[ia]),
                            static_cast<double>(map.per_cell_transitions[ib]));
    bp.lifetimes_equal = std::abs(bp.tau_ng - bp.tau_g) <= 0.15 * 0.5 * (bp.tau_ng + bp.tau_g);
    bp.converged = true;
    bp.seed = map.master_seed;
    bp.note = "interpolated between grid cells";
    out.points.push_back(bp);
  }
  return out;
}

nlohmann::json to_json(const OperatingPoint& op) {
  nlohmann::json j = {{"omega1", op.omega1},
                      {"omega2", op.omega2},
                      {"seed", op.seed},
                      {"valid", op.valid},
                      {"note", op.note},
                      {"boundary", op.boundary},
                      {"boundary_source", op.boundary_source},
                      {"mode_separation", op.mode_separation},
                      {"simulated_time", op.simulated_time},
                      {"p_ng", op.occupancy.p_ng},
                      {"p_g", op.occupancy.p_g}};
  j["dwell"] = op.dwell ? to_json(*op.dwell) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const BalancePoint& bp) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : bp.history)
    hist.push_back({{"omega1", h.x}, {"p_g", h.estimate.p}, {"halfwidth", h.estimate.halfwidth}});
  return {{"omega1_star", bp.omega1_star},
          {"omega2", bp.omega2},
          {"p_g_at_star", bp.p_g_at_star},
          {"p_g_halfwidth", bp.p_g_halfwidth},
          {"tolerance", bp.tolerance},
          {"tau", bp.tau},
          {"tau_stderr", bp.tau_stderr},
          {"tau_ng", bp.tau_ng},
          {"tau_g", bp.tau_g},
          {"half_life", bp.half_life},
          {"boundary", bp.boundary},
          {"discriminator_boundary", bp.discriminator_boundary},
          {"n_transitions", bp.n_transitions},
          {"converged", bp.converged},
          {"lifetimes_equal", bp.lifetimes_equal},
          {"seed", bp.seed},
          {"history", hist},
          {"note", bp.note}};
}

BalancePoint balance_point_from_json(const nlohmann::json& j) {
  BalancePoint bp;
  try {
    bp.omega1_star = j.at("omega1_star").get<double>();
    bp.omega2 = j.at("omega2").get<double>();
    bp.p_g_at_star = j.at("p_g_at_star").get<double>();
    bp.p_g_halfwidth = j.at("p_g_halfwidth").get<double>();
    bp.tolerance = j.at("tolerance").get<double>();
    bp.tau = j.at("tau").get<double>();
    bp.tau_stderr = j.at("tau_stderr").get<double>();
    bp.tau_ng = j.at("tau_ng").get<double>();
    bp.tau_g = j.at("tau_g").get<double>();
    bp.half_life = j.at("half_life").get<double>();
    bp.boundary = j.at("boundary").get<double>();
    bp.discriminator_boundary = j.at("discriminator_boundary").get<double>();
    bp.n_transitions = j.at("n_transitions").get<std::size_t>();
    bp.converged = j.at("converged").get<bool>();
    bp.lifetimes_equal = j.at("lifetimes_equal").get<bool>();
    bp.seed = j.at("seed").get<std::uint64_t>();
    bp.note = j.value("note", "");
    for (const auto& h : j.value("history", nlohmann::json::array())) {
      bp.history.push_back({h.at("omega1").get<double>(),
                            {h.at("p_g").get<double>(), h.at("halfwidth").get<double>()}});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("balance point: ") + e.what());
  }
  return bp;
}

namespace {

nlohmann::json nullable(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
  return a;
}

}  // namespace

nlohmann::json to_json(const CalibrationMap& m) {
  return {{"omega1_grid", m.omega1_grid},
          {"omega2_grid", m.omega2_grid},
          {"layout", "row-major over (omega2, omega1)"},
          {"p_ng", nullable(m.p_ng)},
          {"p_g", nullable(m.p_g)},
          {"p_g_halfwidth", nullable(m.p_g_halfwidth)},
          {"tau_ng", nullable(m.tau_ng)},
          {"tau_g", nullable(m.tau_g)},
          {"tau_ng_stderr", nullable(m.tau_ng_stderr)},
          {"tau_g_stderr", nullable(m.tau_g_stderr)},
          {"boundary", nullable(m.boundary)},
          {"simulated_time", nullable(m.simulated_time)},
          {"per_cell_transitions", m.per_cell_transitions},
          {"valid", m.valid},
          {"notes", m.notes},
          {"master_seed", m.master_seed},
          {"min_transitions", m.min_transitions}};
}

nlohmann::json to_json(const LocusResult& locus) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& bp : locus.points) pts.push_back(to_json(bp));
  return {{"points", pts}, {"notes", locus.notes}};
}

void write_map_csv(const std::filesystem::path& path, const CalibrationMap& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "omega1,omega2,p_ng,p_g,tau_ng,tau_g,n_transitions,valid\n" << std::setprecision(12);
  for (std::size_t i2 = 0; i2 < m.omega2_grid.size(); ++i2) {
    for (std::size_t i1 = 0; i1 < m.omega1_grid.size(); ++i1) {
      const std::size_t c = m.index(i1, i2);
      out << m.omega1_grid[i1] << ',' << m.omega2_grid[i2] << ',' << m.p_ng[c] << ',' << m.p_g[c]
          << ',' << m.tau_ng[c] << ',' << m.tau_g[c] << ',' << m.per_cell_transitions[c] << ','
          << static_cast<int>(m.valid[c]) << '\n';
    }
  }
}

void write_locus_csv(const std::filesystem::path& path, const LocusResult& locus) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "omega2,omega1_star,tau,tau_stderr,tau_ng,tau_g,half_life\n" << std::setprecision(12);
  for (const auto& bp : locus.points)
    out << bp.omega2 << ',' << bp.omega1_star << ',' << bp.tau << ',' << bp.tau_stderr << ','
        << bp.tau_ng << ',' << bp.tau_g << ',' << bp.half_life << '\n';
}

}  // namespace brng
