#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "brng/bit_io.hpp"
#include "brng/bitgen.hpp"
#include "brng/error.hpp"
#include "brng/log.hpp"
#include "brng/nist.hpp"
#include "brng/rng.hpp"
#include "brng/steady_state.hpp"
#include "brng/svg.hpp"
#include "brng/trace_stats.hpp"
#include "brng/trajectory_io.hpp"
#include "cli/cli.hpp"

namespace brng::cli {
namespace {

// Stream tags for substream(): keeps per-command engines disjoint.
constexpr std::uint64_t kRefineStream = 0x726566;    // "ref"
constexpr std::uint64_t kGenerateStream = 0x67656e;  // "gen"

double ghz(double rad_s) { return rad_s / kAngularGHz; }

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

void emit(const RunContext& ctx, const json& summary, const std::string& text) {
  if (ctx.json_stdout) {
    *ctx.out << summary.dump(2) << '\n';
  } else {
    *ctx.out << text;
  }
}

json stamped(const RunContext& ctx, json j) {
  j["config_digest"] = ctx.config_digest;
  j["version"] = version();
  return j;
}

std::vector<double> decimate(const std::vector<double>& v, std::size_t max_points) {
  if (v.size() <= max_points) return v;
  const std::size_t every = (v.size() + max_points - 1) / max_points;
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += every) out.push_back(v[i]);
  return out;
}

double omega_th_of(const PhysicalParams& p) {
  PhysicalParams base = p;
  base.omega_pump1 = base.omega_pump2 = 0.0;
  return closed_form_thresholds(base).omega_th;
}

std::filesystem::path input_or(const RunContext& ctx, const json& blk, const char* key,
                               const std::string& fallback) {
  if (!ctx.opts.input.empty()) return ctx.opts.input;
  if (blk.contains(key)) return blk.at(key).get<std::string>();
  return ctx.out_path(fallback);
}

void require_file(const std::filesystem::path& p, const std::string& what) {
  if (!std::filesystem::exists(p)) {
    throw ConfigError(what + " not found: " + p.string() + " (pass --input)");
  }
}

json modes_json(const ModeAnalysis& m) {
  return {{"bimodal", m.bimodal},
          {"lower_mode", m.bimodal ? json(m.lower_mode) : json(nullptr)},
          {"upper_mode", m.bimodal ? json(m.upper_mode) : json(nullptr)},
          {"pdf_minimum", m.bimodal ? json(m.pdf_minimum) : json(nullptr)}};
}

TestParams nist_params(const json& blk) {
  TestParams t;
  try {
    t.block_frequency_m = blk.value("block_frequency_m", t.block_frequency_m);
    if (blk.contains("template")) {
      t.template_bits.clear();
      for (char c : blk.at("template").get<std::string>()) {
        if (c != '0' && c != '1') throw ConfigError("nist.template must be a 0/1 string");
        t.template_bits.push_back(c == '1');
      }
    }
    t.all_templates = blk.value("all_templates", t.all_templates);
    t.template_length = blk.value("template_length", t.template_length);
    t.template_blocks = blk.value("template_blocks", t.template_blocks);
    t.overlapping_m = blk.value("overlapping_m", t.overlapping_m);
    t.overlapping_block = blk.value("overlapping_block", t.overlapping_block);
    if (blk.contains("universal_L")) t.universal_L = blk.at("universal_L").get<int>();
    if (blk.contains("approximate_entropy_m")) {
      t.approximate_entropy_m = blk.at("approximate_entropy_m").get<int>();
    }
    if (blk.contains("serial_m")) t.serial_m = blk.at("serial_m").get<int>();
    t.linear_complexity_m = blk.value("linear_complexity_m", t.linear_complexity_m);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("nist block: ") + e.what());
  }
  return t;
}

std::vector<double> amplitude_list(const json& spec, const RunContext& ctx, const std::string& field) {
  std::vector<double> v;
  if (spec.is_array()) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
      v.push_back(amplitude(spec[i], ctx, field + "[" + std::to_string(i) + "]"));
    }
  } else {
    v.push_back(amplitude(spec, ctx, field));
  }
  return v;
}

std::vector<double> grid_axis(const json& spec, const RunContext& ctx, const std::string& field) {
  if (spec.is_array()) return amplitude_list(spec, ctx, field);
  if (!spec.is_object() || !spec.contains("from") || !spec.contains("to") || !spec.contains("n")) {
    throw ConfigError(field + ": expected an array or {from, to, n}");
  }
  const double lo = amplitude(spec.at("from"), ctx, field + ".from");
  const double hi = amplitude(spec.at("to"), ctx, field + ".to");
  const auto n = spec.at("n").get<std::size_t>();
  if (n == 0 || (n > 1 && !(hi > lo))) throw ConfigError(field + ": need n >= 1 and to > from");
  return GridSpec::linspace(lo, hi, n);
}

}  // namespace

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(RunContext& ctx) {
  const PhysicalParams& p = ctx.params;
  const DerivedRates d = derived_rates(p);
  const Thresholds th = closed_form_thresholds(p);
  const RegimeReport r = regime_report(p);
  std::optional<BistableWindow> window;
  std::string window_note;
  try {
    window = bistable_window_numeric(p);
    if (!window) window_note = "no stable generating branch below the off-state instability";
  } catch (const ScanBudgetExhausted& e) {
    window_note = e.what();
  }
  const bool window_ok = window && window->omega_lo < window->omega_hi;

  json j{{"units", "rates and amplitudes in 2pi GHz, intensities in quanta"},
         {"derived_rates",
          {{"delta_omega", ghz(d.delta_omega)},
           {"Delta2", ghz(d.Delta2)},
           {"Delta_b", ghz(d.Delta_b)},
           {"Gamma", ghz(d.Gamma)},
           {"compact_forms_hold", d.compact_forms_hold}}},
         {"thresholds",
          {{"omega_ex", ghz(th.omega_ex)},
           {"omega_th", ghz(th.omega_th)},
           {"omega_th_printed", ghz(th.omega_th_printed)},
           {"j_b", th.j_b}}},
         {"regime",
          {{"hard_excitation", r.hard_excitation},
           {"hard_excitation_bound", ghz(r.hard_excitation_bound)},
           {"jump_visibility_bound", ghz(r.jump_visibility_bound)},
           {"jump_visible", r.jump_visible},
           {"criterion_ratio", r.criterion_ratio},
           {"criterion_satisfied", r.criterion_satisfied},
           {"bistable_closed_form", r.bistable_closed_form},
           {"notes", r.notes}}},
         {"numerical_window",
          window ? json{{"omega_lo", ghz(window->omega_lo)}, {"omega_hi", ghz(window->omega_hi)}}
                 : json(nullptr)},
         {"warnings", ctx.warnings}};
  if (!window_note.empty()) j["numerical_window_note"] = window_note;
  const int code = r.hard_excitation && window_ok ? 0 : 2;
  j["regime_satisfied"] = code == 0;
  const auto path = ctx.out_path("analyze.json");
  write_json_file(path, stamped(ctx, j));

  std::ostringstream os;
  os << "derived rates (2pi GHz)\n"
     << "  delta_omega      " << fmt(ghz(d.delta_omega)) << "\n"
     << "  Delta2           " << fmt(ghz(d.Delta2)) << "\n"
     << "  Delta_b          " << fmt(ghz(d.Delta_b)) << "\n"
     << "thresholds\n"
     << "  omega_ex         " << fmt(ghz(th.omega_ex)) << "\n"
     << "  omega_th         " << fmt(ghz(th.omega_th)) << "\n"
     << "  J_b              " << fmt(th.j_b) << "\n"
     << "regime\n"
     << "  hard_excitation  " << (r.hard_excitation ? "true" : "false") << "  (bound "
     << fmt(ghz(r.hard_excitation_bound)) << ")\n"
     << "  criterion_ratio  " << fmt(r.criterion_ratio, 4) << "\n"
     << "  jump_visible     " << (r.jump_visible ? "true" : "false") << "\n";
  if (window) {
    os << "numerical window  [" << fmt(ghz(window->omega_lo)) << ", " << fmt(ghz(window->omega_hi))
       << "]\n";
  } else {
    os << "numerical window  none (" << window_note << ")\n";
  }
  emit(ctx, j, os.str());
  Manifest m;
  m.outputs = {path};
  write_manifest(ctx, m, code);
  return code;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(RunContext& ctx) {
  const json blk = ctx.block("simulate");
  PhysicalParams p = ctx.params;
  Manifest m;
  if (blk.contains("calibration")) {
    const std::filesystem::path cal = blk.at("calibration").get<std::string>();
    require_file(cal, "calibration");
    const json cj = read_json_file(cal);
    const BalancePoint bp = balance_point_from_json(cj.at("points").at(blk.value("point", 0)));
    p.omega_pump1 = bp.omega1_star;
    p.omega_pump2 = bp.omega2;
    m.inputs.push_back(cal);
  }
  if (blk.contains("omega_pump1")) p.omega_pump1 = amplitude(blk.at("omega_pump1"), ctx, "simulate.omega_pump1");
  if (blk.contains("omega_pump2")) p.omega_pump2 = amplitude(blk.at("omega_pump2"), ctx, "simulate.omega_pump2");
  if (p.omega_pump1 == 0.0) warn("simulate: pump amplitude is zero");

  const SimConfig cfg = sim_config(ctx);
  if (cfg.n_steps <= cfg.burn_in_steps) throw ConfigError("sim.duration (or sim.n_steps) is required");
  const Trajectory traj = integrate(p, cfg);
  const auto bin = ctx.out_path("trajectory.bin");
  const auto csv = ctx.out_path("trajectory.csv");
  write_trajectory(bin, traj);
  write_trajectory_csv(csv, traj);
  m.outputs = {bin, csv};

  const std::vector<double> a2 = traj.intensities(1);
  const ModeAnalysis modes = analyze_modes(a2);
  double mean[3] = {0, 0, 0};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (int k = 0; k < 3; ++k) mean[k] += traj.intensity(i, k);
  }
  for (double& v : mean) v /= std::max<std::size_t>(traj.size(), 1);

  json j{{"omega_pump1", p.omega_pump1},
         {"omega_pump2", p.omega_pump2},
         {"omega_pump1_over_omega_th", p.omega_pump1 / omega_th_of(p)},
         {"sim", to_json(cfg)},
         {"frames", traj.size()},
         {"t0", traj.t0},
         {"dt_effective", traj.dt_effective},
         {"params_digest", traj.params_digest},
         {"mean_intensity", {{"a1", mean[0]}, {"a2", mean[1]}, {"b", mean[2]}}},
         {"modes", modes_json(modes)},
         {"warnings", traj.warnings}};
  if (modes.bimodal) j["p_g_at_pdf_minimum"] = occupancy_probabilities(a2, modes.pdf_minimum).p_g;
  const auto summary = ctx.out_path("simulate.json");
  write_json_file(summary, stamped(ctx, j));
  m.outputs.push_back(summary);

  if (ctx.svg) {
    std::vector<double> t(traj.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = traj.time(i) * 1e9;
    const auto svg_path = ctx.out_path("trace.svg");
    svg::write(svg_path, svg::line_plot({{"|a2|^2", decimate(t, 4000), decimate(a2, 4000)}},
                                        {"Time trace of |a2|^2", "t (ns)", "|a2|^2"}));
    m.outputs.push_back(svg_path);
  }
  m.seeds["integrator"] = cfg.seed;
  m.params_digest = traj.params_digest;

  std::ostringstream os;
  os << "frames " << traj.size() << " over " << fmt(traj.size() * traj.dt_effective * 1e6) << " us\n"
     << "mean |a2|^2 " << fmt(mean[1]) << ", mean |b|^2 " << fmt(mean[2]) << "\n"
     << "bimodal " << (modes.bimodal ? "yes" : "no");
  if (modes.bimodal) {
    os << " (modes " << fmt(modes.lower_mode) << " / " << fmt(modes.upper_mode) << ", minimum "
       << fmt(modes.pdf_minimum) << ")";
  }
  os << "\nwrote " << bin.string() << "\n";
  emit(ctx, j, os.str());
  write_manifest(ctx, m, 0);
  return 0;
}

// ---- distribution ----------------------------------------------------------

int cmd_distribution(RunContext& ctx) {
  const json blk = ctx.block("distribution");
  const auto in = input_or(ctx, blk, "input", "trajectory.bin");
  require_file(in, "trajectory");
  const Trajectory traj = read_trajectory(in);
  const std::vector<double> a2 = traj.intensities(1);
  const auto n_bins = blk.value("n_bins", std::size_t{200});
  const BoundaryStrategy strategy =
      boundary_strategy_from_string(blk.value("strategy", std::string("balance-median")));

  const EmpiricalDistribution dist = empirical_distribution(a2, n_bins);
  const ModeAnalysis modes = analyze_modes(a2, n_bins);
  const double boundary = find_boundary(a2, strategy, n_bins);
  const Occupancy occ = occupancy_probabilities(a2, boundary);

  DwellOptions dopt;
  dopt.hysteresis_fraction = blk.value("hysteresis", dopt.hysteresis_fraction);
  dopt.min_transitions = blk.value("min_transitions", dopt.min_transitions);
  if (modes.bimodal) dopt.mode_separation = modes.upper_mode - modes.lower_mode;
  // Lifetimes are decoded around the pdf minimum whenever there is one: the
  // median only separates the states at balance.
  const double dwell_boundary = modes.bimodal ? modes.pdf_minimum : boundary;
  std::optional<DwellStats> dwell;
  std::string dwell_note;
  try {
    dwell = dwell_times(traj, dwell_boundary, dopt);
  } catch (const FewerThanMinTransitions& e) {
    dwell_note = e.what();
  }

  Manifest m;
  m.inputs = {in};
  const auto csv = ctx.out_path("distribution.csv");
  write_distribution_csv(csv, dist);
  m.outputs.push_back(csv);
  if (dwell) {
    const auto iv = ctx.out_path("dwell_intervals.csv");
    write_intervals_csv(iv, *dwell);
    m.outputs.push_back(iv);
  }
  json j{{"input", in.string()},
         {"trajectory_digest", traj.params_digest},
         {"strategy", to_string(strategy)},
         {"boundary", boundary},
         {"dwell_boundary", dwell_boundary},
         {"occupancy", {{"p_ng", occ.p_ng}, {"p_g", occ.p_g}}},
         {"modes", modes_json(modes)},
         {"distribution", to_json(dist)},
         {"dwell", dwell ? to_json(*dwell) : json(nullptr)}};
  if (!dwell_note.empty()) j["dwell_note"] = dwell_note;
  const auto summary = ctx.out_path("distribution.json");
  write_json_file(summary, stamped(ctx, j));
  m.outputs.push_back(summary);

  if (ctx.svg) {
    std::vector<double> centers(dist.n_bins());
    for (std::size_t i = 0; i < centers.size(); ++i) centers[i] = dist.bin_center(i);
    const auto pdf = ctx.out_path("pdf.svg"), cdf = ctx.out_path("cdf.svg");
    svg::write(pdf, svg::line_plot({{"pdf", centers, dist.pdf}}, {"PDF of |a2|^2", "|a2|^2", "pdf"}));
    svg::write(cdf, svg::line_plot({{"cdf", centers, dist.cdf}}, {"CDF of |a2|^2", "|a2|^2", "cdf"}));
    m.outputs.push_back(pdf);
    m.outputs.push_back(cdf);
  }

  std::ostringstream os;
  os << "boundary (" << to_string(strategy) << ") " << fmt(boundary) << "\n"
     << "p_ng " << fmt(occ.p_ng, 4) << ", p_g " << fmt(occ.p_g, 4) << "\n";
  if (dwell) {
    os << "tau_ng " << fmt(dwell->tau_ng * 1e9, 4) << " ns, tau_g " << fmt(dwell->tau_g * 1e9, 4)
       << " ns, transitions " << dwell->n_transitions << "\n";
  } else {
    os << "dwell statistics refused: " << dwell_note << "\n";
  }
  emit(ctx, j, os.str());
  const int code = dwell ? 0 : static_cast<int>(ExitCode::kStatistical);
  write_manifest(ctx, m, code);
  return code;
}

// ---- calibrate --------------------------------------------------------------

int cmd_calibrate(RunContext& ctx) {
  const json blk = ctx.block("calibrate");
  const PhysicalParams& p = ctx.params;
  BalanceOptions bo;
  bo.evaluation = evaluation_options(blk, ctx);
  bo.bisection.tol_p = blk.value("tol_p", bo.bisection.tol_p);
  bo.bisection.max_evaluations = blk.value("max_evaluations", bo.bisection.max_evaluations);
  // "auto" sizes the median trace from the measured lifetime
  const json refine_spec = blk.value("refine_time", json("auto"));
  const double refine_sd = blk.value("refine_target_sd", 0.004);
  if (!refine_spec.is_number() && refine_spec != json("auto"))
    throw ConfigError("calibrate.refine_time must be a number of seconds or \"auto\"");
  const std::vector<double> omega2 =
      blk.contains("omega2") ? amplitude_list(blk.at("omega2"), ctx, "calibrate.omega2")
                             : std::vector<double>{0.0};
  std::optional<std::pair<double, double>> bracket;
  if (blk.contains("bracket")) {
    const json& b = blk.at("bracket");
    if (!b.is_array() || b.size() != 2) throw ConfigError("calibrate.bracket needs two amplitudes");
    bracket = std::pair{amplitude(b[0], ctx, "calibrate.bracket[0]"),
                        amplitude(b[1], ctx, "calibrate.bracket[1]")};
  }
  const double omega_th = omega_th_of(p);

  Manifest m;
  json points = json::array(), seeds = json::array();
  bool all_converged = true;
  std::ostringstream os, csv;
  csv << std::setprecision(17)
      << "omega2,omega1_star,omega1_star_over_omega_th,p_g,p_g_halfwidth,tau_ng,tau_g,tau,"
         "boundary,n_transitions,converged,lifetimes_equal\n";
  std::ostringstream hist;
  hist << std::setprecision(17) << "omega2,step,omega1,p_g,halfwidth\n";
  for (std::size_t i = 0; i < omega2.size(); ++i) {
    const std::uint64_t seed = substream(ctx.master_seed, i);
    BalancePoint bp = balance_pump(p, omega2[i], bracket, seed, bo);
    const std::uint64_t refine_seed = substream(seed, kRefineStream);
    const double refine_time =
        refine_spec.is_number() ? refine_spec.get<double>() : refine_time_for(bp, refine_sd);
    if (refine_time > 0) bp.boundary = refine_boundary(p, bp, refine_time, refine_seed, bo.evaluation);
    all_converged = all_converged && bp.converged;
    json pj = to_json(bp);
    pj["omega1_star_over_omega_th"] = bp.omega1_star / omega_th;
    pj["refine_time"] = refine_time;
    points.push_back(pj);
    seeds.push_back({{"balance", seed}, {"refine", refine_seed}});
    csv << bp.omega2 << ',' << bp.omega1_star << ',' << bp.omega1_star / omega_th << ','
        << bp.p_g_at_star << ',' << bp.p_g_halfwidth << ',' << bp.tau_ng << ',' << bp.tau_g << ','
        << bp.tau << ',' << bp.boundary << ',' << bp.n_transitions << ',' << bp.converged << ','
        << bp.lifetimes_equal << '\n';
    for (std::size_t k = 0; k < bp.history.size(); ++k) {
      hist << bp.omega2 << ',' << k << ',' << bp.history[k].x << ',' << bp.history[k].estimate.p
           << ',' << bp.history[k].estimate.halfwidth << '\n';
    }
    os << "omega2 " << fmt(ghz(bp.omega2), 4) << ": Omega1*/Omega_th " << fmt(bp.omega1_star / omega_th, 5)
       << ", p_g " << fmt(bp.p_g_at_star, 3) << " +- " << fmt(bp.p_g_halfwidth, 2) << ", tau "
       << fmt(bp.tau * 1e9, 4) << " ns (ng " << fmt(bp.tau_ng * 1e9, 4) << ", g "
       << fmt(bp.tau_g * 1e9, 4) << "), " << (bp.converged ? "converged" : "NOT converged") << "\n";
  }
  const EvaluationOptions& e = bo.evaluation;
  json j{{"params", to_json(p)},
         {"omega_th_closed_form", omega_th},
         {"evaluation",
          {{"dt", e.dt},
           {"scheme", to_string(e.scheme)},
           {"noise_scale", e.noise_scale},
           {"record_stride", e.record_stride},
           {"target_transitions", e.target_transitions},
           {"max_sim_time", e.max_sim_time},
           {"hysteresis", e.dwell.hysteresis_fraction}}},
         {"refine_time", refine_spec},
         {"refine_target_sd", refine_sd},
         {"points", points}};
  const auto out = ctx.out_path("balance.json");
  write_json_file(out, stamped(ctx, j));
  const auto csv_path = ctx.out_path("calibrate.csv"), hist_path = ctx.out_path("calibrate_history.csv");
  std::ofstream(csv_path) << csv.str();
  std::ofstream(hist_path) << hist.str();
  m.outputs = {out, csv_path, hist_path};
  m.seeds["points"] = seeds;
  emit(ctx, j, os.str());
  const int code = all_converged ? 0 : static_cast<int>(ExitCode::kStatistical);
  write_manifest(ctx, m, code);
  return code;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep(RunContext& ctx) {
  const json blk = ctx.block("sweep");
  if (!blk.contains("omega1") || !blk.contains("omega2")) {
    throw ConfigError("sweep block needs 'omega1' and 'omega2' axes");
  }
  GridSpec grid{grid_axis(blk.at("omega1"), ctx, "sweep.omega1"),
                grid_axis(blk.at("omega2"), ctx, "sweep.omega2")};
  const EvaluationOptions opts = evaluation_options(blk, ctx);
  std::size_t last_pct = 0;
  const CalibrationMap map = sweep_maps(
      ctx.params, grid, ctx.master_seed, opts, ctx.threads, [&](std::size_t done, std::size_t total) {
        const std::size_t pct = 100 * done / total;
        if (pct >= last_pct + 10 || done == total) {
          last_pct = pct;
          *ctx.err << "sweep " << done << "/" << total << "\n";
        }
      });
  const LocusResult locus = balance_locus(map);
  const double omega_th = omega_th_of(ctx.params);

  Manifest m;
  const auto map_csv = ctx.out_path("map.csv"), locus_csv = ctx.out_path("locus.csv");
  write_map_csv(map_csv, map);
  write_locus_csv(locus_csv, locus);
  json j{{"omega_th_closed_form", omega_th}, {"map", to_json(map)}, {"locus", to_json(locus)}};
  const auto summary = ctx.out_path("sweep.json");
  write_json_file(summary, stamped(ctx, j));
  m.outputs = {map_csv, locus_csv, summary};
  m.seeds["cells"] = "substream(master_seed, cell index)";

  std::vector<double> x1, x2;
  for (double v : map.omega1_grid) x1.push_back(v / omega_th);
  for (double v : map.omega2_grid) x2.push_back(v / omega_th);
  if (ctx.svg) {
    std::vector<double> tau(map.cells());
    for (std::size_t k = 0; k < tau.size(); ++k) tau[k] = std::sqrt(map.tau_ng[k] * map.tau_g[k]) * 1e9;
    const auto pg = ctx.out_path("p_g_map.svg"), tm = ctx.out_path("tau_map.svg"),
               lt = ctx.out_path("locus_tau.svg");
    svg::write(pg, svg::heatmap(x1, x2, map.p_g, map.valid,
                                {"p_g", "Omega1 / Omega_th", "Omega2 / Omega_th"}));
    svg::write(tm, svg::heatmap(x1, x2, tau, map.valid,
                                {"sqrt(tau_ng tau_g) (ns)", "Omega1 / Omega_th", "Omega2 / Omega_th"}));
    svg::Series s{"tau on the balance locus", {}, {}, true};
    for (const auto& bp : locus.points) {
      s.x.push_back(bp.omega2 / omega_th);
      s.y.push_back(bp.tau * 1e9);
    }
    svg::write(lt, svg::line_plot({s}, {"Lifetime along p_g = 0.5", "Omega2 / Omega_th", "tau (ns)"}));
    m.outputs.insert(m.outputs.end(), {pg, tm, lt});
  }

  std::ostringstream os;
  std::size_t valid = 0;
  for (auto v : map.valid) valid += v;
  os << "cells " << map.cells() << " (" << valid << " valid)\n";
  for (const auto& bp : locus.points) {
    os << "omega2/Omega_th " << fmt(bp.omega2 / omega_th, 4) << ": Omega1*/Omega_th "
       << fmt(bp.omega1_star / omega_th, 5) << ", tau " << fmt(bp.tau * 1e9, 4) << " ns\n";
  }
  for (const auto& n : locus.notes) os << "note: " << n << "\n";
  emit(ctx, j, os.str());
  const int code = locus.points.empty() ? static_cast<int>(ExitCode::kStatistical) : 0;
  write_manifest(ctx, m, code);
  return code;
}

// ---- generate --------------------------------------------------------------

int cmd_generate(RunContext& ctx) {
  const json blk = ctx.block("generate");
  const auto cal = input_or(ctx, blk, "calibration", "balance.json");
  require_file(cal, "calibration");
  const json cj = read_json_file(cal);
  const BalancePoint bp = balance_point_from_json(cj.at("points").at(blk.value("point", 0)));
  PhysicalParams p = params_from_resolved_json(cj.at("params"));
  p.omega_pump1 = bp.omega1_star;
  p.omega_pump2 = bp.omega2;

  const auto n_bits = blk.value("n_bits", std::uint64_t{0});
  if (n_bits == 0) throw ConfigError("generate.n_bits must be >= 1");
  const BitFormat format = bit_format_from_string(blk.value("format", std::string("packed")));
  BitGenOptions go;
  const json& ev = cj.at("evaluation");
  go.dt = ev.value("dt", go.dt);
  go.scheme = scheme_from_string(ev.value("scheme", to_string(go.scheme)));
  go.noise_scale = ev.value("noise_scale", go.noise_scale);
  go.sampling.divisor = blk.value("divisor", go.sampling.divisor);
  go.sampling.balance_tolerance = blk.value("balance_tolerance", go.sampling.balance_tolerance);
  if (blk.contains("f_s")) go.f_s = blk.at("f_s").get<double>();
  if (blk.contains("burn_in_time")) go.burn_in_time = blk.at("burn_in_time").get<double>();

  const std::uint64_t seed = substream(ctx.master_seed, kGenerateStream);
  const auto path = ctx.out_path(format == BitFormat::kPacked ? "bits.bin" : "bits.txt");
  BitFileWriter writer(path, format);
  std::uint64_t same = 0, pairs = 0;
  int prev = -1;
  const BitStream meta = generate_bits_to(
      p, bp, n_bits, seed,
      [&](std::span<const std::uint8_t> b) {
        writer.write(b);
        for (auto v : b) {
          if (prev >= 0) {
            ++pairs;
            same += v == prev;
          }
          prev = v;
        }
      },
      go);
  writer.close(meta);

  json j = to_json(meta);
  j["n_bits"] = n_bits;
  j["format"] = to_string(format);
  j["calibration"] = cal.string();
  j["tau"] = bp.tau;
  j["half_life"] = bp.half_life;
  j["divisor"] = go.sampling.divisor;
  j["lag1_agreement"] = pairs ? static_cast<double>(same) / pairs : 0.0;
  const auto summary = ctx.out_path("generate.json");
  write_json_file(summary, stamped(ctx, j));

  std::ostringstream os;
  os << "bits " << n_bits << " at f_s " << fmt(meta.f_s / 1e6, 5) << " MHz (" << to_string(format)
     << ")\nones fraction " << fmt(meta.ones_fraction, 5) << "\nsimulated " << fmt(meta.simulated_time * 1e3, 5)
     << " ms\nwrote " << path.string() << "\n";
  emit(ctx, j, os.str());
  Manifest m;
  m.inputs = {cal};
  m.outputs = {path, sidecar_path(path), summary};
  m.seeds["generator"] = seed;
  m.params_digest = meta.params_digest;
  write_manifest(ctx, m, 0);
  return 0;
}

// ---- nist ------------------------------------------------------------------

int cmd_nist(RunContext& ctx) {
  const json blk = ctx.block("nist");
  std::filesystem::path in = input_or(ctx, blk, "input", "bits.bin");
  if (!std::filesystem::exists(in) && ctx.opts.input.empty() && !blk.contains("input")) {
    in = ctx.out_path("bits.txt");
  }
  require_file(in, "bit file");
  const BitStream bs = import_bits(in);
  const double alpha = blk.value("alpha", 0.01);
  const SuiteReport rep = run_suite(bs.bits, alpha, nist_params(blk), ctx.threads);

  json j = to_json(rep);
  j["input"] = in.string();
  const auto summary = ctx.out_path("nist.json"), table = ctx.out_path("nist.txt");
  write_json_file(summary, stamped(ctx, j));
  const std::string text = format_table(rep);
  std::ofstream(table) << text;
  Manifest m;
  m.inputs = {in};
  m.outputs = {summary, table};
  if (ctx.svg) {
    std::vector<std::string> labels;
    std::vector<double> worst;
    for (const auto& r : rep.results) {
      labels.push_back(display_name(r.test));
      worst.push_back(r.worst_p);
    }
    const auto svg_path = ctx.out_path("nist.svg");
    svg::write(svg_path, svg::log_bars(labels, worst, alpha, {"Worst P-value per test", "P-value", ""}));
    m.outputs.push_back(svg_path);
  }
  emit(ctx, j, text);
  const int code = rep.overall_pass ? 0 : static_cast<int>(ExitCode::kStatistical);
  write_manifest(ctx, m, code);
  return code;
}

// ---- report ----------------------------------------------------------------

int cmd_report(RunContext& ctx) {
  const std::filesystem::path dir = ctx.opts.input.empty() ? ctx.opts.out : ctx.opts.input;
  if (!std::filesystem::is_directory(dir)) throw ConfigError("run directory not found: " + dir.string());
  const char* sections[] = {"analyze", "simulate", "distribution", "balance", "sweep", "generate", "nist"};
  const char* commands[] = {"analyze", "simulate", "distribution", "calibrate", "sweep", "generate", "nist"};
  json rep{{"run_dir", dir.string()}, {"sections", json::object()}, {"manifests", json::object()}};
  Manifest m;
  for (std::size_t i = 0; i < std::size(sections); ++i) {
    const auto f = dir / (std::string(sections[i]) + ".json");
    if (std::filesystem::exists(f)) {
      rep["sections"][sections[i]] = read_json_file(f);
      m.inputs.push_back(f);
    }
    const auto mf = dir / (std::string(commands[i]) + ".manifest.json");
    if (std::filesystem::exists(mf)) {
      json mj = read_json_file(mf);
      mj.erase("resolved_config");
      rep["manifests"][commands[i]] = mj;
    }
  }
  if (rep["sections"].empty()) throw ConfigError("no command outputs in " + dir.string());
  const auto out = ctx.out_path("report.json");
  write_json_file(out, stamped(ctx, rep));
  m.outputs.push_back(out);

  if (ctx.svg) {
    const json& s = rep["sections"];
    const auto traj = dir / "trajectory.bin";
    if (std::filesystem::exists(traj)) {
      const Trajectory t = read_trajectory(traj);
      std::vector<double> x(t.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = t.time(i) * 1e9;
      const auto f = ctx.out_path("fig_trace.svg");
      svg::write(f, svg::line_plot({{"|a2|^2", decimate(x, 4000), decimate(t.intensities(1), 4000)}},
                                   {"Time trace of |a2|^2", "t (ns)", "|a2|^2"}));
      m.outputs.push_back(f);
    }
    if (s.contains("distribution")) {
      const json& d = s["distribution"]["distribution"];
      const auto edges = d.at("bin_edges").get<std::vector<double>>();
      std::vector<double> c;
      for (std::size_t i = 0; i + 1 < edges.size(); ++i) c.push_back(0.5 * (edges[i] + edges[i + 1]));
      const auto f = ctx.out_path("fig_pdf_cdf.svg");
      const auto pdf = d.at("pdf").get<std::vector<double>>();
      double peak = *std::max_element(pdf.begin(), pdf.end());
      std::vector<double> scaled;
      for (double v : pdf) scaled.push_back(peak > 0 ? v / peak : 0);
      svg::write(f, svg::line_plot({{"pdf / max", c, scaled}, {"cdf", c, d.at("cdf").get<std::vector<double>>()}},
                                   {"Distribution of |a2|^2", "|a2|^2", ""}));
      m.outputs.push_back(f);
    }
    if (s.contains("sweep")) {
      const json& mp = s["sweep"]["map"];
      const double th = s["sweep"]["omega_th_closed_form"].get<double>();
      std::vector<double> x1, x2;
      for (double v : mp["omega1_grid"].get<std::vector<double>>()) x1.push_back(v / th);
      for (double v : mp["omega2_grid"].get<std::vector<double>>()) x2.push_back(v / th);
      auto nums = [](const json& a) {
        std::vector<double> v;
        for (const auto& e : a) v.push_back(e.is_number() ? e.get<double>() : NAN);
        return v;
      };
      const auto valid = mp["valid"].get<std::vector<unsigned char>>();
      const auto f1 = ctx.out_path("fig_p_g_map.svg"), f2 = ctx.out_path("fig_tau_g_map.svg");
      svg::write(f1, svg::heatmap(x1, x2, nums(mp["p_g"]), valid, {"p_g", "Omega1 / Omega_th", "Omega2 / Omega_th"}));
      std::vector<double> tg = nums(mp["tau_g"]);
      for (double& v : tg) v *= 1e9;
      svg::write(f2, svg::heatmap(x1, x2, tg, valid, {"tau_g (ns)", "Omega1 / Omega_th", "Omega2 / Omega_th"}));
      m.outputs.insert(m.outputs.end(), {f1, f2});
    }
    if (s.contains("nist")) {
      std::vector<std::string> labels;
      std::vector<double> worst;
      for (const auto& r : s["nist"]["results"]) {
        labels.push_back(r.at("name").get<std::string>());
        worst.push_back(r.at("worst_p").get<double>());
      }
      const auto f = ctx.out_path("fig_nist.svg");
      svg::write(f, svg::log_bars(labels, worst, s["nist"]["alpha"].get<double>(),
                                  {"Worst P-value per test", "P-value", ""}));
      m.outputs.push_back(f);
    }
  }
  std::ostringstream os;
  os << "report " << out.string() << " (" << rep["sections"].size() << " sections)\n";
  emit(ctx, rep, os.str());
  write_manifest(ctx, m, 0);
  return 0;
}

}  // namespace brng::cli
